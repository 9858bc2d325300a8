/*
    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License.
*/
#include "gta/core.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace gta {

NodeId NodeId::atomic(std::string name) {
    NodeId id;
    id.constructed_ = false;
    id.name_ = std::move(name);
    return id;
}

NodeId NodeId::constructed(std::string label, std::vector<NodeId> args) {
    NodeId id;
    id.constructed_ = true;
    id.name_ = std::move(label);
    id.args_ = std::move(args);
    return id;
}

std::string NodeId::to_string() const {
    if (!constructed_) return name_;
    std::ostringstream os;
    os << name_ << "(";
    for (std::size_t i = 0; i < args_.size(); ++i) {
        if (i) os << ", ";
        os << args_[i].to_string();
    }
    os << ")";
    return os.str();
}

std::strong_ordering NodeId::operator<=>(const NodeId& o) const {
    if (auto c = constructed_ <=> o.constructed_; c != 0) return c;
    if (auto c = name_ <=> o.name_; c != 0) return c;
    return args_ <=> o.args_;
}

bool multiplicity_allows(Multiplicity m, std::size_t count) {
    switch (m) {
        case Multiplicity::Opt: return count <= 1;
        case Multiplicity::One: return count == 1;
        case Multiplicity::Plus: return count >= 1;
        case Multiplicity::Any: return true;
        case Multiplicity::None: return count == 0;
    }
    return false;
}

namespace {
// Count sets abstracted as (allows 0, allows 1, allows >=2).
struct CountBits {
    bool zero, one, many;
};
CountBits bits(Multiplicity m) {
    switch (m) {
        case Multiplicity::Opt: return {true, true, false};
        case Multiplicity::One: return {false, true, false};
        case Multiplicity::Plus: return {false, true, true};
        case Multiplicity::Any: return {true, true, true};
        case Multiplicity::None: return {true, false, false};
    }
    return {false, false, false};
}
}  // namespace

bool multiplicity_leq(Multiplicity m1, Multiplicity m2) {
    CountBits a = bits(m1), b = bits(m2);
    return (!a.zero || b.zero) && (!a.one || b.one) && (!a.many || b.many);
}

char multiplicity_token(Multiplicity m) {
    switch (m) {
        case Multiplicity::Opt: return '?';
        case Multiplicity::One: return '1';
        case Multiplicity::Plus: return '+';
        case Multiplicity::Any: return '*';
        case Multiplicity::None: return '0';
    }
    return '0';
}

Multiplicity multiplicity_from_token(char c) {
    switch (c) {
        case '?': return Multiplicity::Opt;
        case '1': return Multiplicity::One;
        case '+': return Multiplicity::Plus;
        case '*': return Multiplicity::Any;
        case '0': return Multiplicity::None;
    }
    throw Error(std::string("invalid multiplicity token: ") + c);
}

void Graph::add_node(const NodeId& id) { nodes_.insert(id); }

void Graph::add_label(const NodeId& id, const std::string& label) {
    nodes_.insert(id);
    node_labels_[id].insert(label);
}

void Graph::add_edge(const NodeId& src, const std::string& label, const NodeId& tgt) {
    nodes_.insert(src);
    nodes_.insert(tgt);
    edges_.insert({src, label, tgt});
}

const std::set<std::string>& Graph::labels_of(const NodeId& id) const {
    static const std::set<std::string> kEmpty;
    auto it = node_labels_.find(id);
    return it == node_labels_.end() ? kEmpty : it->second;
}

bool Graph::has_label(const NodeId& id, const std::string& label) const {
    auto it = node_labels_.find(id);
    return it != node_labels_.end() && it->second.count(label) > 0;
}

std::set<NodeId> Graph::successors(const NodeId& u, const SignedEdgeLabel& r) const {
    std::set<NodeId> out;
    for (const auto& [s, l, t] : edges_) {
        if (l != r.label) continue;
        if (!r.inverted && s == u) out.insert(t);
        if (r.inverted && t == u) out.insert(s);
    }
    return out;
}

std::set<std::string> Graph::node_label_universe() const {
    std::set<std::string> out;
    for (const auto& [id, ls] : node_labels_) out.insert(ls.begin(), ls.end());
    return out;
}

std::set<std::string> Graph::edge_label_universe() const {
    std::set<std::string> out;
    for (const auto& [s, l, t] : edges_) out.insert(l);
    return out;
}

void Schema::set_delta(const std::string& a, const SignedEdgeLabel& r, const std::string& b,
                       Multiplicity m) {
    node_labels_.insert(a);
    node_labels_.insert(b);
    edge_labels_.insert(r.label);
    if (m == Multiplicity::None)
        delta_.erase({a, r, b});
    else
        delta_[{a, r, b}] = m;
}

Multiplicity Schema::delta(const std::string& a, const SignedEdgeLabel& r,
                           const std::string& b) const {
    auto it = delta_.find({a, r, b});
    return it == delta_.end() ? Multiplicity::None : it->second;
}

std::vector<SignedEdgeLabel> Schema::signed_edge_labels() const {
    std::vector<SignedEdgeLabel> out;
    for (const auto& r : edge_labels_) {
        out.push_back({r, false});
        out.push_back({r, true});
    }
    return out;
}

bool Schema::operator==(const Schema& o) const {
    return node_labels_ == o.node_labels_ && edge_labels_ == o.edge_labels_ && delta_ == o.delta_;
}

ConformanceReport conforms(const Graph& g, const Schema& s) {
    ConformanceReport rep;
    auto violate = [&](const NodeId& n, std::string what) {
        rep.ok = false;
        rep.violations.push_back({n, std::move(what)});
    };

    for (const auto& n : g.nodes()) {
        const auto& ls = g.labels_of(n);
        if (ls.empty())
            violate(n, "node has no label");
        else if (ls.size() > 1)
            violate(n, "node has more than one label");
        for (const auto& l : ls)
            if (!s.node_labels().count(l)) violate(n, "node label '" + l + "' not in schema");
    }
    for (const auto& [src, l, tgt] : g.edges()) {
        if (!s.edge_labels().count(l)) violate(src, "edge label '" + l + "' not in schema");
    }

    for (const auto& n : g.nodes()) {
        for (const auto& a : g.labels_of(n)) {
            if (!s.node_labels().count(a)) continue;
            for (const auto& r : s.signed_edge_labels()) {
                for (const auto& b : s.node_labels()) {
                    std::size_t count = 0;
                    for (const auto& v : g.successors(n, r))
                        if (g.has_label(v, b)) ++count;
                    Multiplicity m = s.delta(a, r, b);
                    if (!multiplicity_allows(m, count)) {
                        std::ostringstream os;
                        os << "delta(" << a << ", " << r.to_string() << ", " << b
                           << ") = " << multiplicity_token(m) << " violated by count " << count;
                        violate(n, os.str());
                    }
                }
            }
        }
    }
    std::sort(rep.violations.begin(), rep.violations.end());
    rep.violations.erase(std::unique(rep.violations.begin(), rep.violations.end()),
                         rep.violations.end());
    return rep;
}

bool schema_contains(const Schema& s1, const Schema& s2) {
    std::set<std::string> nodes = s1.node_labels(), edges = s1.edge_labels();
    nodes.insert(s2.node_labels().begin(), s2.node_labels().end());
    edges.insert(s2.edge_labels().begin(), s2.edge_labels().end());
    for (const auto& a : nodes)
        for (const auto& r : edges)
            for (bool inv : {false, true})
                for (const auto& b : nodes) {
                    SignedEdgeLabel rl{r, inv};
                    if (!multiplicity_leq(s1.delta(a, rl, b), s2.delta(a, rl, b))) return false;
                }
    return true;
}

namespace {
NodeId rename_id(const NodeId& id, const std::function<NodeId(const NodeId&)>& leaf) {
    if (!id.is_constructed()) return leaf(id);
    std::vector<NodeId> args;
    args.reserve(id.args().size());
    for (const auto& a : id.args()) args.push_back(rename_id(a, leaf));
    return NodeId::constructed(id.name(), args);
}
}  // namespace

Graph disjoint_union(const Graph& g1, const Graph& g2) {
    // Atomic leaves used anywhere in either graph's ids; renames must avoid both.
    std::set<std::string> taken, g2names;
    auto collect = [](const Graph& g, std::set<std::string>& into) {
        std::function<void(const NodeId&)> rec = [&](const NodeId& id) {
            if (!id.is_constructed())
                into.insert(id.name());
            else
                for (const auto& a : id.args()) rec(a);
        };
        for (const auto& n : g.nodes()) rec(n);
    };
    collect(g1, taken);
    collect(g2, g2names);

    std::map<std::string, std::string> renamed;
    std::function<NodeId(const NodeId&)> leaf = [&](const NodeId& a) {
        if (!taken.count(a.name())) return a;
        auto it = renamed.find(a.name());
        if (it != renamed.end()) return NodeId::atomic(it->second);
        int k = 2;
        std::string cand;
        do {
            cand = a.name() + "#" + std::to_string(k++);
        } while (taken.count(cand) || g2names.count(cand));
        taken.insert(cand);
        renamed[a.name()] = cand;
        return NodeId::atomic(cand);
    };

    Graph out = g1;
    for (const auto& n : g2.nodes()) {
        NodeId rn = rename_id(n, leaf);
        out.add_node(rn);
        for (const auto& l : g2.labels_of(n)) out.add_label(rn, l);
    }
    for (const auto& [s, l, t] : g2.edges())
        out.add_edge(rename_id(s, leaf), l, rename_id(t, leaf));
    return out;
}

}  // namespace gta

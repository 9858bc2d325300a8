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
#include "gta/transform.hpp"

#include <algorithm>

namespace gta {

Transformation::Transformation(std::vector<NodeRule> node_rules, std::vector<EdgeRule> edge_rules)
    : node_rules_(std::move(node_rules)), edge_rules_(std::move(edge_rules)) {
    validate();
}

void Transformation::validate() {
    auto record_arity = [&](const std::string& label, std::size_t k) {
        auto [it, inserted] = arity_.try_emplace(label, k);
        if (!inserted && it->second != k)
            throw Error("node label '" + label + "' used with constructor arities " +
                        std::to_string(it->second) + " and " + std::to_string(k));
    };
    for (const auto& r : node_rules_) {
        if (!is_acyclic(r.body)) throw Error("node rule for '" + r.label + "' has a cyclic body");
        if (r.body.free_vars != r.head_vars)
            throw Error("node rule for '" + r.label +
                        "': head variables must equal body free variables");
        record_arity(r.label, r.head_vars.size());
        gamma_.insert(r.label);
    }
    for (const auto& r : edge_rules_) {
        if (!is_acyclic(r.body))
            throw Error("edge rule for '" + r.edge_label + "' has a cyclic body");
        std::vector<std::string> expected = r.src_vars;
        expected.insert(expected.end(), r.tgt_vars.begin(), r.tgt_vars.end());
        if (r.body.free_vars != expected)
            throw Error("edge rule for '" + r.edge_label +
                        "': head variables must equal body free variables");
        for (const auto& x : r.src_vars)
            if (std::find(r.tgt_vars.begin(), r.tgt_vars.end(), x) != r.tgt_vars.end())
                throw Error("edge rule for '" + r.edge_label +
                            "': source and target variables must be disjoint");
        record_arity(r.src_label, r.src_vars.size());
        record_arity(r.tgt_label, r.tgt_vars.size());
        gamma_.insert(r.src_label);
        gamma_.insert(r.tgt_label);
        sigma_.insert(r.edge_label);
    }
}

std::size_t Transformation::arity(const std::string& node_label) const {
    auto it = arity_.find(node_label);
    if (it == arity_.end()) throw Error("unknown node label '" + node_label + "'");
    return it->second;
}

Graph apply(const Transformation& t, const Graph& g) {
    Graph out;
    for (const auto& r : t.node_rules()) {
        for (const auto& tuple : eval_query(r.body, g))
            out.add_label(NodeId::constructed(r.label, tuple), r.label);
    }
    for (const auto& r : t.edge_rules()) {
        std::size_t k = r.src_vars.size();
        for (const auto& tuple : eval_query(r.body, g)) {
            std::vector<NodeId> xs(tuple.begin(), tuple.begin() + k);
            std::vector<NodeId> ys(tuple.begin() + k, tuple.end());
            out.add_edge(NodeId::constructed(r.src_label, xs), r.edge_label,
                         NodeId::constructed(r.tgt_label, ys));
        }
    }
    return out;
}

namespace {
C2rpq all_empty_query(std::size_t arity) {
    C2rpq q;
    if (arity == 0) {
        q.exist_vars.insert("z");
        q.atoms.push_back({PathExpr::empty(), "z", "z"});
        return q;
    }
    for (std::size_t i = 0; i < arity; ++i) {
        std::string v = "x" + std::to_string(i);
        q.free_vars.push_back(v);
        q.atoms.push_back({PathExpr::empty(), v, v});
    }
    return q;
}
}  // namespace

Uc2rpq grouped_node_query(const Transformation& t, const std::string& a) {
    Uc2rpq u;
    for (const auto& r : t.node_rules())
        if (r.label == a) u.disjuncts.push_back(r.body);
    if (u.disjuncts.empty()) u.disjuncts.push_back(all_empty_query(t.arity(a)));
    return u;
}

Uc2rpq grouped_edge_query(const Transformation& t, const std::string& a,
                          const SignedEdgeLabel& r, const std::string& b) {
    Uc2rpq u;
    for (const auto& er : t.edge_rules()) {
        if (er.edge_label != r.label) continue;
        if (!r.inverted) {
            if (er.src_label == a && er.tgt_label == b) u.disjuncts.push_back(er.body);
        } else {
            // Rule r(f_B(ys), f_A(xs)): the A-side tuple comes second in the
            // rule head; reorder free variables to A-side then B-side.
            if (er.src_label == b && er.tgt_label == a) {
                C2rpq q = er.body;
                std::vector<std::string> reordered(er.tgt_vars);
                reordered.insert(reordered.end(), er.src_vars.begin(), er.src_vars.end());
                q.free_vars = reordered;
                u.disjuncts.push_back(std::move(q));
            }
        }
    }
    if (u.disjuncts.empty()) u.disjuncts.push_back(all_empty_query(t.arity(a) + t.arity(b)));
    return u;
}

Transformation trim(const Transformation& t, const Schema& s,
                    const BodySatisfiable& satisfiable) {
    std::vector<NodeRule> nrs;
    std::vector<EdgeRule> ers;
    for (const auto& r : t.node_rules())
        if (satisfiable(r.body, s)) nrs.push_back(r);
    for (const auto& r : t.edge_rules())
        if (satisfiable(r.body, s)) ers.push_back(r);
    return Transformation(std::move(nrs), std::move(ers));
}

}  // namespace gta

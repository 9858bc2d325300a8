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
#include "gta/query.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

namespace gta {

namespace {
PathExpr::Ptr make(PathExpr&& e) { return std::make_shared<const PathExpr>(std::move(e)); }
}  // namespace

PathExpr::Ptr PathExpr::empty() {
    PathExpr e;
    e.kind_ = Kind::Empty;
    return make(std::move(e));
}
PathExpr::Ptr PathExpr::epsilon() {
    PathExpr e;
    e.kind_ = Kind::Epsilon;
    return make(std::move(e));
}
PathExpr::Ptr PathExpr::node_test(std::string label) {
    PathExpr e;
    e.kind_ = Kind::NodeTest;
    e.label_ = std::move(label);
    return make(std::move(e));
}
PathExpr::Ptr PathExpr::step(SignedEdgeLabel r) {
    PathExpr e;
    e.kind_ = Kind::Step;
    e.label_ = r.label;
    e.inverted_ = r.inverted;
    return make(std::move(e));
}
PathExpr::Ptr PathExpr::concat(Ptr a, Ptr b) {
    PathExpr e;
    e.kind_ = Kind::Concat;
    e.left_ = std::move(a);
    e.right_ = std::move(b);
    return make(std::move(e));
}
PathExpr::Ptr PathExpr::alt(Ptr a, Ptr b) {
    PathExpr e;
    e.kind_ = Kind::Union;
    e.left_ = std::move(a);
    e.right_ = std::move(b);
    return make(std::move(e));
}
PathExpr::Ptr PathExpr::star(Ptr a) {
    PathExpr e;
    e.kind_ = Kind::Star;
    e.left_ = std::move(a);
    return make(std::move(e));
}

namespace {
int precedence(PathExpr::Kind k) {
    switch (k) {
        case PathExpr::Kind::Union: return 1;
        case PathExpr::Kind::Concat: return 2;
        default: return 3;
    }
}

void print_expr(const PathExpr& e, std::ostringstream& os, int parent_prec) {
    int prec = precedence(e.kind());
    bool parens = prec < parent_prec;
    if (parens) os << "(";
    switch (e.kind()) {
        case PathExpr::Kind::Empty: os << "empty"; break;
        case PathExpr::Kind::Epsilon: os << "eps"; break;
        case PathExpr::Kind::NodeTest: os << e.label(); break;
        case PathExpr::Kind::Step:
            os << SignedEdgeLabel{e.label(), e.inverted()}.to_string();
            break;
        case PathExpr::Kind::Concat:
            print_expr(*e.left(), os, prec);
            os << " . ";
            print_expr(*e.right(), os, prec);
            break;
        case PathExpr::Kind::Union:
            print_expr(*e.left(), os, prec);
            os << " + ";
            print_expr(*e.right(), os, prec);
            break;
        case PathExpr::Kind::Star:
            print_expr(*e.left(), os, 3);
            os << "*";
            break;
    }
    if (parens) os << ")";
}
}  // namespace

std::string PathExpr::to_string() const {
    std::ostringstream os;
    print_expr(*this, os, 0);
    return os.str();
}

std::set<std::string> PathExpr::node_labels() const {
    std::set<std::string> out;
    if (kind_ == Kind::NodeTest) out.insert(label_);
    if (left_) {
        auto l = left_->node_labels();
        out.insert(l.begin(), l.end());
    }
    if (right_) {
        auto r = right_->node_labels();
        out.insert(r.begin(), r.end());
    }
    return out;
}

std::set<std::string> PathExpr::edge_labels() const {
    std::set<std::string> out;
    if (kind_ == Kind::Step) out.insert(label_);
    if (left_) {
        auto l = left_->edge_labels();
        out.insert(l.begin(), l.end());
    }
    if (right_) {
        auto r = right_->edge_labels();
        out.insert(r.begin(), r.end());
    }
    return out;
}

int PathExpr::size() const {
    int n = 1;
    if (left_) n += left_->size();
    if (right_) n += right_->size();
    return n;
}

namespace {
// Word matcher by recursive descent over (expr, interval).
bool match_range(const PathExpr& e, const std::vector<Symbol>& w, int lo, int hi) {
    switch (e.kind()) {
        case PathExpr::Kind::Empty: return false;
        case PathExpr::Kind::Epsilon: return lo == hi;
        case PathExpr::Kind::NodeTest:
            return hi == lo + 1 && w[lo].is_node_test && w[lo].label == e.label();
        case PathExpr::Kind::Step:
            return hi == lo + 1 && !w[lo].is_node_test && w[lo].label == e.label() &&
                   w[lo].inverted == e.inverted();
        case PathExpr::Kind::Concat:
            for (int mid = lo; mid <= hi; ++mid)
                if (match_range(*e.left(), w, lo, mid) && match_range(*e.right(), w, mid, hi))
                    return true;
            return false;
        case PathExpr::Kind::Union:
            return match_range(*e.left(), w, lo, hi) || match_range(*e.right(), w, lo, hi);
        case PathExpr::Kind::Star: {
            if (lo == hi) return true;
            // Split off a nonempty prefix matched by the body.
            for (int mid = lo + 1; mid <= hi; ++mid)
                if (match_range(*e.left(), w, lo, mid) && match_range(e, w, mid, hi)) return true;
            return false;
        }
    }
    return false;
}
}  // namespace

bool PathExpr::matches(const std::vector<Symbol>& word) const {
    return match_range(*this, word, 0, static_cast<int>(word.size()));
}

bool Nfa::accepts(const std::vector<Symbol>& word) const {
    std::set<int> cur = initial;
    for (const auto& sym : word) {
        std::set<int> next;
        for (const auto& t : transitions)
            if (cur.count(t.from) && t.sym == sym) next.insert(t.to);
        cur = std::move(next);
        if (cur.empty()) return false;
    }
    for (int q : cur)
        if (final.count(q)) return true;
    return false;
}

namespace {
// Glushkov data per subexpression over position indices.
struct GlushkovInfo {
    bool nullable = false;
    std::set<int> first, last;
};

void glushkov(const PathExpr& e, std::vector<Symbol>& positions,
              std::map<int, std::set<int>>& follow, GlushkovInfo& out) {
    switch (e.kind()) {
        case PathExpr::Kind::Empty:
            out = {false, {}, {}};
            return;
        case PathExpr::Kind::Epsilon:
            out = {true, {}, {}};
            return;
        case PathExpr::Kind::NodeTest:
        case PathExpr::Kind::Step: {
            int p = static_cast<int>(positions.size());
            Symbol s;
            if (e.kind() == PathExpr::Kind::NodeTest) {
                s.is_node_test = true;
                s.label = e.label();
            } else {
                s.is_node_test = false;
                s.label = e.label();
                s.inverted = e.inverted();
            }
            positions.push_back(s);
            out = {false, {p}, {p}};
            return;
        }
        case PathExpr::Kind::Concat: {
            GlushkovInfo a, b;
            glushkov(*e.left(), positions, follow, a);
            glushkov(*e.right(), positions, follow, b);
            for (int p : a.last) follow[p].insert(b.first.begin(), b.first.end());
            out.nullable = a.nullable && b.nullable;
            out.first = a.first;
            if (a.nullable) out.first.insert(b.first.begin(), b.first.end());
            out.last = b.last;
            if (b.nullable) out.last.insert(a.last.begin(), a.last.end());
            return;
        }
        case PathExpr::Kind::Union: {
            GlushkovInfo a, b;
            glushkov(*e.left(), positions, follow, a);
            glushkov(*e.right(), positions, follow, b);
            out.nullable = a.nullable || b.nullable;
            out.first = a.first;
            out.first.insert(b.first.begin(), b.first.end());
            out.last = a.last;
            out.last.insert(b.last.begin(), b.last.end());
            return;
        }
        case PathExpr::Kind::Star: {
            GlushkovInfo a;
            glushkov(*e.left(), positions, follow, a);
            for (int p : a.last) follow[p].insert(a.first.begin(), a.first.end());
            out.nullable = true;
            out.first = a.first;
            out.last = a.last;
            return;
        }
    }
}

// Forward bisimulation quotient: repeatedly merge states with equal finality
// and identical outgoing (symbol, class) signatures.
Nfa quotient(const Nfa& n) {
    std::vector<int> cls(n.state_count);
    for (int q = 0; q < n.state_count; ++q) cls[q] = n.final.count(q) ? 1 : 0;

    for (;;) {
        std::map<std::pair<int, std::set<std::pair<Symbol, int>>>, int> sig_to_class;
        std::vector<int> next(n.state_count);
        for (int q = 0; q < n.state_count; ++q) {
            std::set<std::pair<Symbol, int>> sig;
            for (const auto& t : n.transitions)
                if (t.from == q) sig.insert({t.sym, cls[t.to]});
            auto key = std::make_pair(cls[q], std::move(sig));
            auto [it, inserted] = sig_to_class.try_emplace(key, static_cast<int>(sig_to_class.size()));
            next[q] = it->second;
        }
        if (next == cls) break;
        cls = std::move(next);
    }

    int count = 0;
    for (int q = 0; q < n.state_count; ++q) count = std::max(count, cls[q] + 1);
    Nfa out;
    out.state_count = count;
    for (int q : n.initial) out.initial.insert(cls[q]);
    for (int q : n.final) out.final.insert(cls[q]);
    std::set<Nfa::Transition> ts;
    for (const auto& t : n.transitions) ts.insert({cls[t.from], t.sym, cls[t.to]});
    out.transitions.assign(ts.begin(), ts.end());
    return out;
}
}  // namespace

Nfa compile_nfa(const PathExpr::Ptr& e) {
    std::vector<Symbol> positions;
    std::map<int, std::set<int>> follow;
    GlushkovInfo info;
    glushkov(*e, positions, follow, info);

    Nfa n;
    n.state_count = static_cast<int>(positions.size()) + 1;  // state 0 is fresh initial
    n.initial = {0};
    for (int p : info.first) n.transitions.push_back({0, positions[p], p + 1});
    for (const auto& [p, fs] : follow)
        for (int q : fs) n.transitions.push_back({p + 1, positions[q], q + 1});
    for (int p : info.last) n.final.insert(p + 1);
    if (info.nullable) n.final.insert(0);
    return quotient(n);
}

Nfa reverse_nfa(const Nfa& n) {
    Nfa out;
    out.state_count = n.state_count;
    out.initial = n.final;
    out.final = n.initial;
    for (const auto& t : n.transitions) out.transitions.push_back({t.to, t.sym.inverse(), t.from});
    std::sort(out.transitions.begin(), out.transitions.end());
    return out;
}

bool Atom::trivial() const {
    if (src != tgt) return false;
    auto k = expr->kind();
    return k == PathExpr::Kind::Empty || k == PathExpr::Kind::Epsilon ||
           k == PathExpr::Kind::NodeTest;
}

std::set<std::string> C2rpq::all_vars() const {
    std::set<std::string> out(free_vars.begin(), free_vars.end());
    out.insert(exist_vars.begin(), exist_vars.end());
    for (const auto& a : atoms) {
        out.insert(a.src);
        out.insert(a.tgt);
    }
    return out;
}

std::set<std::string> C2rpq::node_labels() const {
    std::set<std::string> out;
    for (const auto& a : atoms) {
        auto l = a.expr->node_labels();
        out.insert(l.begin(), l.end());
    }
    return out;
}

std::set<std::string> C2rpq::edge_labels() const {
    std::set<std::string> out;
    for (const auto& a : atoms) {
        auto l = a.expr->edge_labels();
        out.insert(l.begin(), l.end());
    }
    return out;
}

std::set<std::string> Uc2rpq::node_labels() const {
    std::set<std::string> out;
    for (const auto& d : disjuncts) {
        auto l = d.node_labels();
        out.insert(l.begin(), l.end());
    }
    return out;
}

std::set<std::string> Uc2rpq::edge_labels() const {
    std::set<std::string> out;
    for (const auto& d : disjuncts) {
        auto l = d.edge_labels();
        out.insert(l.begin(), l.end());
    }
    return out;
}

std::set<std::pair<NodeId, NodeId>> eval_atom(const PathExpr::Ptr& e, const Graph& g) {
    Nfa nfa = compile_nfa(e);
    std::set<std::pair<NodeId, NodeId>> out;

    // Group transitions by source state once.
    std::map<int, std::vector<Nfa::Transition>> by_state;
    for (const auto& t : nfa.transitions) by_state[t.from].push_back(t);

    for (const auto& u : g.nodes()) {
        // BFS over (node, state) product.
        std::set<std::pair<NodeId, int>> seen;
        std::deque<std::pair<NodeId, int>> work;
        for (int q : nfa.initial) {
            if (seen.insert({u, q}).second) work.push_back({u, q});
        }
        while (!work.empty()) {
            auto [v, q] = work.front();
            work.pop_front();
            if (nfa.final.count(q)) out.insert({u, v});
            auto it = by_state.find(q);
            if (it == by_state.end()) continue;
            for (const auto& t : it->second) {
                if (t.sym.is_node_test) {
                    if (g.has_label(v, t.sym.label) && seen.insert({v, t.to}).second)
                        work.push_back({v, t.to});
                } else {
                    for (const auto& w : g.successors(v, t.sym.edge()))
                        if (seen.insert({w, t.to}).second) work.push_back({w, t.to});
                }
            }
        }
    }
    return out;
}

namespace {
using Relation = std::set<std::pair<NodeId, NodeId>>;

void join_atoms(const C2rpq& q, const Graph& g, std::vector<std::pair<std::size_t, Relation>>& rels,
                std::size_t idx, std::map<std::string, NodeId>& binding, AnswerSet& out) {
    if (idx == rels.size()) {
        // Bind any variable untouched by atoms to every node.
        std::vector<std::string> unbound;
        for (const auto& v : q.all_vars())
            if (!binding.count(v)) unbound.push_back(v);
        std::vector<std::map<std::string, NodeId>> complete{binding};
        for (const auto& v : unbound) {
            std::vector<std::map<std::string, NodeId>> next;
            for (const auto& b : complete)
                for (const auto& n : g.nodes()) {
                    auto b2 = b;
                    b2[v] = n;
                    next.push_back(std::move(b2));
                }
            complete = std::move(next);
        }
        for (const auto& b : complete) {
            std::vector<NodeId> tuple;
            tuple.reserve(q.free_vars.size());
            bool ok = true;
            for (const auto& v : q.free_vars) {
                auto it = b.find(v);
                if (it == b.end()) {
                    ok = false;
                    break;
                }
                tuple.push_back(it->second);
            }
            if (ok) out.insert(tuple);
        }
        return;
    }
    const Atom& a = q.atoms[rels[idx].first];
    for (const auto& [u, v] : rels[idx].second) {
        auto su = binding.find(a.src);
        if (su != binding.end() && su->second != u) continue;
        auto sv = binding.find(a.tgt);
        if (sv != binding.end() && sv->second != v) continue;
        bool had_u = su != binding.end(), had_v = sv != binding.end();
        binding[a.src] = u;
        if (a.src == a.tgt && u != v) {
            if (!had_u) binding.erase(a.src);
            continue;
        }
        binding[a.tgt] = v;
        join_atoms(q, g, rels, idx + 1, binding, out);
        if (!had_v) binding.erase(a.tgt);
        if (!had_u) binding.erase(a.src);
    }
}
}  // namespace

AnswerSet eval_query(const C2rpq& q, const Graph& g) {
    std::vector<std::pair<std::size_t, Relation>> rels;
    rels.reserve(q.atoms.size());
    for (std::size_t i = 0; i < q.atoms.size(); ++i)
        rels.push_back({i, eval_atom(q.atoms[i].expr, g)});
    // Greedy smallest-relation-first join order.
    std::sort(rels.begin(), rels.end(),
              [](const auto& a, const auto& b) { return a.second.size() < b.second.size(); });

    AnswerSet out;
    std::map<std::string, NodeId> binding;
    join_atoms(q, g, rels, 0, binding, out);
    return out;
}

AnswerSet eval_query(const Uc2rpq& q, const Graph& g) {
    AnswerSet out;
    for (const auto& d : q.disjuncts) {
        auto a = eval_query(d, g);
        out.insert(a.begin(), a.end());
    }
    return out;
}

namespace {
struct UnionFind {
    std::map<std::string, std::string> parent;
    const std::string& find(const std::string& x) {
        auto it = parent.find(x);
        if (it == parent.end()) {
            parent[x] = x;
            return parent.find(x)->first;
        }
        if (it->second == x) return it->second;
        std::string root = find(it->second);
        parent[x] = root;
        return parent.find(x)->second;
    }
    // Returns false if already joined.
    bool join(const std::string& a, const std::string& b) {
        std::string ra = find(a), rb = find(b);
        if (ra == rb) return false;
        parent[ra] = rb;
        return true;
    }
};
}  // namespace

bool is_acyclic(const C2rpq& q) {
    UnionFind uf;
    for (const auto& v : q.all_vars()) uf.find(v);
    for (const auto& a : q.atoms) {
        if (a.trivial()) continue;
        if (!uf.join(a.src, a.tgt)) return false;  // self-loop or closes a cycle
    }
    return true;
}

bool is_acyclic(const Uc2rpq& q) {
    for (const auto& d : q.disjuncts)
        if (!is_acyclic(d)) return false;
    return true;
}

bool is_connected(const C2rpq& q) {
    auto vars = q.all_vars();
    if (vars.size() <= 1) return true;
    UnionFind uf;
    for (const auto& v : vars) uf.find(v);
    for (const auto& a : q.atoms) uf.join(a.src, a.tgt);
    const std::string& root = uf.find(*vars.begin());
    for (const auto& v : vars)
        if (uf.find(v) != root) return false;
    return true;
}

std::vector<C2rpq> connected_components(const C2rpq& q) {
    UnionFind uf;
    for (const auto& v : q.all_vars()) uf.find(v);
    for (const auto& a : q.atoms) uf.join(a.src, a.tgt);

    std::map<std::string, C2rpq> comps;  // keyed by representative
    for (const auto& v : q.all_vars()) comps[uf.find(v)];

    for (const auto& v : q.free_vars) comps[uf.find(v)].free_vars.push_back(v);
    for (const auto& v : q.exist_vars) comps[uf.find(v)].exist_vars.insert(v);
    for (const auto& a : q.atoms) comps[uf.find(a.src)].atoms.push_back(a);

    std::vector<C2rpq> out;
    for (auto& [root, c] : comps) {
        // Make sure atom-only variables are registered as existential.
        for (const auto& a : c.atoms)
            for (const auto& v : {a.src, a.tgt})
                if (std::find(c.free_vars.begin(), c.free_vars.end(), v) == c.free_vars.end())
                    c.exist_vars.insert(v);
        if (c.atoms.empty()) {
            // Isolated variable: single-variable component with an eps self-atom.
            c.atoms.push_back({PathExpr::epsilon(), root, root});
        }
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace gta

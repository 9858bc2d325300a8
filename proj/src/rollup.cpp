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
#include "gta/rollup.hpp"

#include <algorithm>
#include <map>

namespace gta {

namespace {

struct VarTree {
    std::map<std::string, std::vector<std::pair<std::size_t, std::string>>> adj;  // var -> (atom, other)
};

int count_reversals(const C2rpq& q, const VarTree& vt, const std::string& root) {
    // Orient every non-trivial atom child->parent; count atoms whose source
    // variable is the parent (those need automaton reversal).
    int reversals = 0;
    std::set<std::string> visited{root};
    std::vector<std::string> stack{root};
    while (!stack.empty()) {
        std::string u = stack.back();
        stack.pop_back();
        auto it = vt.adj.find(u);
        if (it == vt.adj.end()) continue;
        for (const auto& [ai, v] : it->second) {
            if (visited.count(v)) continue;
            visited.insert(v);
            stack.push_back(v);
            if (q.atoms[ai].src == u) ++reversals;  // atom points parent->child
        }
    }
    return reversals;
}

}  // namespace

QueryTree tree_decompose(const C2rpq& q) {
    if (!q.is_boolean()) throw Error("tree_decompose: query is not Boolean");
    if (!is_acyclic(q)) throw Error("tree_decompose: query is not acyclic");
    if (!is_connected(q)) throw Error("tree_decompose: query is not connected");
    if (q.all_vars().empty()) throw Error("tree_decompose: query has no variables");

    VarTree vt;
    std::map<std::string, int> degree;
    for (const auto& v : q.all_vars()) degree[v] = 0;
    for (std::size_t i = 0; i < q.atoms.size(); ++i) {
        const Atom& a = q.atoms[i];
        if (a.trivial()) continue;
        vt.adj[a.src].push_back({i, a.tgt});
        vt.adj[a.tgt].push_back({i, a.src});
        ++degree[a.src];
        ++degree[a.tgt];
    }

    // Root: leaf variable (degree <= 1) minimizing (reversal count, name).
    std::string root;
    int best = -1;
    for (const auto& [v, d] : degree) {
        if (d > 1) continue;
        int rev = count_reversals(q, vt, v);
        if (best < 0 || rev < best || (rev == best && v < root)) {
            best = rev;
            root = v;
        }
    }
    if (root.empty()) throw Error("tree_decompose: no leaf variable (query not acyclic?)");

    QueryTree tree;
    tree.root_var = root;
    tree.nodes.resize(q.atoms.size());

    std::map<std::string, std::vector<int>> trivial_at;
    for (std::size_t i = 0; i < q.atoms.size(); ++i)
        if (q.atoms[i].trivial()) trivial_at[q.atoms[i].src].push_back(static_cast<int>(i));

    // BFS orientation from the root; atoms_at(var) collects the tree atoms
    // hanging below var plus the trivial atoms sitting at var.
    std::map<std::string, std::vector<int>> below;
    std::set<std::string> visited{root};
    std::vector<std::string> stack{root};
    while (!stack.empty()) {
        std::string u = stack.back();
        stack.pop_back();
        auto it = vt.adj.find(u);
        if (it == vt.adj.end()) continue;
        for (const auto& [ai, v] : it->second) {
            if (visited.count(v)) continue;
            visited.insert(v);
            stack.push_back(v);
            QueryTree::AtomNode& n = tree.nodes[ai];
            n.expr = q.atoms[ai].expr;
            n.child_var = v;
            n.reversed = (q.atoms[ai].src == u);  // atom points parent->child
            below[u].push_back(static_cast<int>(ai));
        }
    }
    for (std::size_t i = 0; i < q.atoms.size(); ++i) {
        if (!q.atoms[i].trivial()) continue;
        QueryTree::AtomNode& n = tree.nodes[i];
        n.expr = q.atoms[i].expr;
        n.child_var = q.atoms[i].src;
        n.reversed = false;
        below[q.atoms[i].src].push_back(static_cast<int>(i));
    }

    for (std::size_t i = 0; i < q.atoms.size(); ++i) {
        if (q.atoms[i].trivial()) continue;  // trivial atoms have no subtree
        for (int c : below[tree.nodes[i].child_var])
            if (c != static_cast<int>(i)) tree.nodes[i].children.push_back(c);
    }
    tree.root_atoms = below[root];
    return tree;
}

namespace {

struct DisjunctRollup {
    const QueryTree* tree;
    std::vector<Nfa> automata;                 // per atom
    std::vector<std::vector<std::string>> state_names;  // per atom, per state
    TBox* out;

    const std::string& name(int atom, int state) const { return state_names[atom][state]; }

    // One start inclusion per choice of a final state in each child automaton.
    void emit_start_rules(int atom) {
        const auto& children = tree->nodes[atom].children;
        std::vector<Conjunction> choices{{}};
        for (int c : children) {
            std::vector<Conjunction> next;
            for (const auto& base : choices)
                for (int f : automata[c].final) {
                    Conjunction k = base;
                    k.insert(name(c, f));
                    next.push_back(std::move(k));
                }
            choices = std::move(next);
        }
        for (const auto& k : choices)
            for (int i : automata[atom].initial)
                out->add(ConceptInclusion::subsume(k, name(atom, i)));
    }
};

}  // namespace

RollupResult rollup(const Uc2rpq& q) {
    RollupResult result;
    for (std::size_t d = 0; d < q.disjuncts.size(); ++d) {
        QueryTree tree = tree_decompose(q.disjuncts[d]);

        DisjunctRollup ctx;
        ctx.tree = &tree;
        ctx.out = &result.tbox;
        ctx.automata.resize(tree.nodes.size());
        ctx.state_names.resize(tree.nodes.size());

        int counter = 0;
        for (std::size_t a = 0; a < tree.nodes.size(); ++a) {
            Nfa n = compile_nfa(tree.nodes[a].expr);
            if (tree.nodes[a].reversed) n = reverse_nfa(n);
            ctx.automata[a] = std::move(n);
            for (int s = 0; s < ctx.automata[a].state_count; ++s) {
                std::string nm = std::string(kReservedPrefix) + "q" + std::to_string(d) + "_" +
                                 std::to_string(counter++);
                ctx.state_names[a].push_back(nm);
                result.gamma_q.insert(nm);
            }
        }

        for (std::size_t a = 0; a < tree.nodes.size(); ++a) {
            // Transition rules (1) and (2).
            for (const auto& t : ctx.automata[a].transitions) {
                if (t.sym.is_node_test)
                    result.tbox.add(ConceptInclusion::subsume({ctx.name(a, t.from), t.sym.label},
                                                              ctx.name(a, t.to)));
                else
                    result.tbox.add(ConceptInclusion::forall({ctx.name(a, t.from)}, t.sym.edge(),
                                                             {ctx.name(a, t.to)}));
            }
            ctx.emit_start_rules(static_cast<int>(a));
        }

        // Denial rules (4): one per choice of a final state in each atom
        // incident to the root variable.
        std::vector<Conjunction> choices{{}};
        for (int a : tree.root_atoms) {
            std::vector<Conjunction> next;
            for (const auto& base : choices)
                for (int f : ctx.automata[a].final) {
                    Conjunction k = base;
                    k.insert(ctx.name(a, f));
                    next.push_back(std::move(k));
                }
            choices = std::move(next);
        }
        for (const auto& k : choices) result.tbox.add(ConceptInclusion::bottom(k));
    }
    return result;
}

bool rollup_holds(const Graph& g, const RollupResult& r) {
    Graph ext = least_fixpoint_extension(g, r.tbox, r.gamma_q);
    // Only the denial inclusions can fail on the least valuation.
    TBox denials;
    for (const auto& ci : r.tbox.cis())
        if (ci.kind == ConceptInclusion::Kind::Bottom) denials.add(ci);
    return model_check(ext, denials).ok;
}

}  // namespace gta

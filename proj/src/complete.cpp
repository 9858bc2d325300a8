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
#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>

#include "gta/dl.hpp"

namespace gta {

namespace {

using Mask = std::uint64_t;

struct Interner {
    std::vector<std::string> names;
    std::map<std::string, int> index;

    int intern(const std::string& s) {
        auto [it, inserted] = index.try_emplace(s, static_cast<int>(names.size()));
        if (inserted) names.push_back(s);
        return it->second;
    }
    Mask mask_of(const Conjunction& k) {
        Mask m = 0;
        for (const auto& a : k) m |= Mask{1} << intern(a);
        return m;
    }
    Conjunction conj_of(Mask m) const {
        Conjunction k;
        for (std::size_t i = 0; i < names.size(); ++i)
            if (m & (Mask{1} << i)) k.insert(names[i]);
        return k;
    }
};

struct RoleRule {
    Mask lhs;
    SignedEdgeLabel role;
    Mask rhs;
};

/// Canonical-model chase over interned label masks. Decides Horn
/// exists-entailment: T |= K <= exists R.K' iff the canonical model of K
/// forces an R-successor of the root whose labels cover K'.
struct ChaseCtx {
    std::vector<std::pair<Mask, int>> subs;  // lhs mask -> concept bit
    std::vector<Mask> bots;
    std::vector<RoleRule> foralls, exists_rules, noexists_rules, atmost_rules;
    CompletionCaps caps;

    static ChaseCtx build(const TBox& t, Interner& in, const CompletionCaps& caps) {
        ChaseCtx c;
        c.caps = caps;
        for (const auto& ci : t.cis()) {
            switch (ci.kind) {
                case ConceptInclusion::Kind::Subsume:
                    c.subs.push_back({in.mask_of(ci.lhs), in.intern(ci.subsumer)});
                    break;
                case ConceptInclusion::Kind::Bottom: c.bots.push_back(in.mask_of(ci.lhs)); break;
                case ConceptInclusion::Kind::ForAll:
                    c.foralls.push_back({in.mask_of(ci.lhs), ci.role, in.mask_of(ci.rhs)});
                    break;
                case ConceptInclusion::Kind::Exists:
                    c.exists_rules.push_back({in.mask_of(ci.lhs), ci.role, in.mask_of(ci.rhs)});
                    break;
                case ConceptInclusion::Kind::NoExists:
                    c.noexists_rules.push_back({in.mask_of(ci.lhs), ci.role, in.mask_of(ci.rhs)});
                    break;
                case ConceptInclusion::Kind::AtMostOne:
                    c.atmost_rules.push_back({in.mask_of(ci.lhs), ci.role, in.mask_of(ci.rhs)});
                    break;
                case ConceptInclusion::Kind::Disjunction:
                    throw Error("completion requires a Horn TBox (no disjunction)");
            }
        }
        return c;
    }

    Mask closure(Mask m, bool* inconsistent) const {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& [lhs, bit] : subs) {
                Mask b = Mask{1} << bit;
                if ((m & lhs) == lhs && !(m & b)) {
                    m |= b;
                    changed = true;
                }
            }
        }
        if (inconsistent) {
            *inconsistent = false;
            for (Mask b : bots)
                if ((m & b) == b) *inconsistent = true;
        }
        return m;
    }

    struct TreeNode {
        Mask labels = 0;
        int parent = -1;
        SignedEdgeLabel role_from_parent;  // edge parent ->role-> this node
        bool alive = true;
        int depth = 0;
    };

    /// Label masks of the root's forced successors per role, or nullopt when
    /// the root conjunction is unsatisfiable.
    std::optional<std::map<SignedEdgeLabel, std::vector<Mask>>> chase_root(Mask k) const {
        bool bad = false;
        std::vector<TreeNode> tree(1);
        tree[0].labels = closure(k, &bad);
        if (bad) return std::nullopt;

        auto successors_of = [&](int n, const SignedEdgeLabel& r, std::vector<int>& out) {
            out.clear();
            if (tree[n].parent >= 0 && tree[tree[n].parent].alive &&
                tree[n].role_from_parent.inverse() == r)
                out.push_back(tree[n].parent);
            for (int c = 0; c < static_cast<int>(tree.size()); ++c)
                if (tree[c].alive && tree[c].parent == n && tree[c].role_from_parent == r)
                    out.push_back(c);
        };

        auto merge = [&](int a, int b) {
            tree[a].labels |= tree[b].labels;
            for (auto& n : tree)
                if (n.alive && n.parent == b) n.parent = a;
            tree[b].alive = false;
        };

        for (int round = 0; round < caps.max_rounds; ++round) {
            bool changed = false;
            for (int n = 0; n < static_cast<int>(tree.size()); ++n) {
                if (!tree[n].alive) continue;
                Mask before = tree[n].labels;
                tree[n].labels = closure(tree[n].labels, &bad);
                if (bad) return std::nullopt;
                if (tree[n].labels != before) changed = true;

                std::vector<int> succ;
                for (const auto& fa : foralls) {
                    if ((tree[n].labels & fa.lhs) != fa.lhs) continue;
                    successors_of(n, fa.role, succ);
                    for (int v : succ)
                        if ((tree[v].labels & fa.rhs) != fa.rhs) {
                            tree[v].labels |= fa.rhs;
                            changed = true;
                        }
                }
                for (const auto& ne : noexists_rules) {
                    if ((tree[n].labels & ne.lhs) != ne.lhs) continue;
                    successors_of(n, ne.role, succ);
                    for (int v : succ)
                        if ((tree[v].labels & ne.rhs) == ne.rhs) return std::nullopt;
                }
                for (const auto& am : atmost_rules) {
                    if ((tree[n].labels & am.lhs) != am.lhs) continue;
                    successors_of(n, am.role, succ);
                    std::vector<int> matching;
                    for (int v : succ)
                        if ((tree[v].labels & am.rhs) == am.rhs) matching.push_back(v);
                    if (matching.size() >= 2) {
                        // Merge into the smallest index (the parent, if it matched).
                        std::sort(matching.begin(), matching.end());
                        for (std::size_t i = 1; i < matching.size(); ++i)
                            merge(matching.front(), matching[i]);
                        changed = true;
                    }
                }
                for (const auto& ex : exists_rules) {
                    if ((tree[n].labels & ex.lhs) != ex.lhs) continue;
                    successors_of(n, ex.role, succ);
                    bool witnessed = false;
                    for (int v : succ)
                        if ((tree[v].labels & ex.rhs) == ex.rhs) witnessed = true;
                    if (witnessed) continue;
                    if (tree[n].depth >= caps.chase_depth ||
                        static_cast<int>(tree.size()) >= caps.chase_nodes)
                        continue;  // frontier cut; labels derived so far remain forced
                    TreeNode child;
                    child.labels = ex.rhs;
                    child.parent = n;
                    child.role_from_parent = ex.role;
                    child.depth = tree[n].depth + 1;
                    tree.push_back(child);
                    changed = true;
                }
            }
            if (!changed) break;
        }

        std::map<SignedEdgeLabel, std::vector<Mask>> out;
        for (int c = 1; c < static_cast<int>(tree.size()); ++c)
            if (tree[c].alive && tree[c].parent == 0)
                out[tree[c].role_from_parent].push_back(tree[c].labels);
        return out;
    }
};

struct CompletionState {
    Interner in;
    TBox t;
    CompletionCaps caps;
    Mask schema_mask = 0;

    std::optional<ChaseCtx> ctx;
    std::map<Mask, std::optional<std::map<SignedEdgeLabel, std::vector<Mask>>>> chase_memo;
    std::map<Mask, std::vector<std::pair<SignedEdgeLabel, Mask>>> succ_memo;
    std::vector<Mask> universe;
    std::vector<SignedEdgeLabel> roles;

    void rebuild() {
        ctx = ChaseCtx::build(t, in, caps);
        chase_memo.clear();
        succ_memo.clear();
        // Drop universe members that turned inconsistent after reversals.
        std::vector<Mask> alive;
        for (Mask k : universe) {
            bool bad = false;
            ctx->closure(k, &bad);
            if (!bad) alive.push_back(k);
        }
        universe = std::move(alive);
    }

    const std::optional<std::map<SignedEdgeLabel, std::vector<Mask>>>& witnesses(Mask k) {
        auto it = chase_memo.find(k);
        if (it == chase_memo.end()) it = chase_memo.emplace(k, ctx->chase_root(k)).first;
        return it->second;
    }

    bool entails_exists(Mask k, const SignedEdgeLabel& r, Mask k2) {
        const auto& w = witnesses(k);
        if (!w) return true;  // inconsistent lhs entails everything
        auto it = w->find(r);
        if (it == w->end()) return false;
        for (Mask f : it->second)
            if ((f & k2) == k2) return true;
        return false;
    }

    // T |= K2 <= atmost1 R.K via a subsuming at-most CI.
    bool entails_atmost(Mask k2, const SignedEdgeLabel& r, Mask k) {
        bool bad = false;
        Mask cl = ctx->closure(k2, &bad);
        if (bad) return true;
        for (const auto& am : ctx->atmost_rules) {
            if (am.role != r) continue;
            if ((cl & am.lhs) == am.lhs && (k & am.rhs) == am.rhs) return true;
        }
        return false;
    }

    bool edge(Mask k, const SignedEdgeLabel& r, Mask k2) {
        return entails_exists(k, r, k2) && entails_atmost(k2, r.inverse(), k);
    }

    const std::vector<std::pair<SignedEdgeLabel, Mask>>& edge_successors(Mask k) {
        auto it = succ_memo.find(k);
        if (it != succ_memo.end()) return it->second;
        std::vector<std::pair<SignedEdgeLabel, Mask>> out;
        for (const auto& r : roles)
            for (Mask k2 : universe)
                if (edge(k, r, k2)) out.push_back({r, k2});
        return succ_memo.emplace(k, std::move(out)).first->second;
    }
};

/// In-completion reduction: unbacked conjunction-level at-mosts become
/// NoExists (their triples are unsatisfiable for an S-driven TBox), but
/// backed ones are kept so the reversal CIs of the running example survive
/// verbatim in the output.
TBox reduce_replace_only(const TBox& t, const Schema& s) {
    auto is_label_level = [&](const ConceptInclusion& ci) {
        return ci.lhs.size() == 1 && ci.rhs.size() == 1 && s.node_labels().count(*ci.lhs.begin()) &&
               s.node_labels().count(*ci.rhs.begin());
    };
    TBox out;
    for (const auto& ci : t.cis()) {
        if (ci.kind != ConceptInclusion::Kind::AtMostOne || is_label_level(ci)) {
            out.add(ci);
            continue;
        }
        bool backed = false;
        for (const auto& other : t.cis()) {
            if (other.kind != ConceptInclusion::Kind::AtMostOne || !is_label_level(other)) continue;
            if (other.role != ci.role) continue;
            if (ci.lhs.count(*other.lhs.begin()) && ci.rhs.count(*other.rhs.begin())) {
                backed = true;
                break;
            }
        }
        if (backed)
            out.add(ci);
        else
            out.add(ConceptInclusion::noexists(ci.lhs, ci.role, ci.rhs));
    }
    return out;
}

}  // namespace

bool chase_entails_exists(const TBox& t, const Conjunction& k, const SignedEdgeLabel& r,
                          const Conjunction& k2, const CompletionCaps& caps) {
    Interner in;
    Mask mk = in.mask_of(k), mk2 = in.mask_of(k2);
    ChaseCtx ctx = ChaseCtx::build(t, in, caps);
    auto w = ctx.chase_root(mk);
    if (!w) return true;
    auto it = w->find(r);
    if (it == w->end()) return false;
    for (Mask f : it->second)
        if ((f & mk2) == mk2) return true;
    return false;
}

TBox complete(const TBox& t, const Schema& s, const SatEngine& engine,
              const CompletionCaps& caps) {
    CompletionState st;
    st.t = t;
    st.caps = caps;

    std::set<std::string> concepts = t.concept_names();
    concepts.insert(s.node_labels().begin(), s.node_labels().end());
    if (static_cast<int>(concepts.size()) > caps.max_concepts)
        throw CapExceededError("completion: " + std::to_string(concepts.size()) +
                               " concept names exceed the cap of " +
                               std::to_string(caps.max_concepts));
    for (const auto& c : concepts) st.in.intern(c);
    for (const auto& a : s.node_labels()) st.schema_mask |= Mask{1} << st.in.intern(a);

    std::set<std::string> role_labels = t.role_names();
    role_labels.insert(s.edge_labels().begin(), s.edge_labels().end());
    for (const auto& r : role_labels) {
        st.roles.push_back({r, false});
        st.roles.push_back({r, true});
    }

    Mask nonschema_mask = 0;
    std::size_t nonschema_count = 0;
    for (std::size_t i = 0; i < st.in.names.size(); ++i)
        if (!(st.schema_mask & (Mask{1} << i))) {
            nonschema_mask |= Mask{1} << i;
            ++nonschema_count;
        }
    std::size_t schema_count = std::size_t(__builtin_popcountll(st.schema_mask));
    if (nonschema_count > 20 ||
        schema_count * (std::size_t{1} << nonschema_count) > caps.max_conjunctions)
        throw CapExceededError("completion: conjunction lattice exceeds the cap");

    st.ctx = ChaseCtx::build(st.t, st.in, caps);
    // Universe: one schema label plus any non-schema subset, consistency
    // filtered (satisfiable finmod-cycle nodes carry exactly one schema
    // label).
    for (std::size_t g = 0; g < st.in.names.size(); ++g) {
        if (!(st.schema_mask & (Mask{1} << g))) continue;
        Mask sub = nonschema_mask;
        for (;;) {
            st.universe.push_back((Mask{1} << g) | sub);
            if (sub == 0) break;
            sub = (sub - 1) & nonschema_mask;
        }
    }
    std::sort(st.universe.begin(), st.universe.end(), [&](Mask a, Mask b) {
        int pa = __builtin_popcountll(a), pb = __builtin_popcountll(b);
        if (pa != pb) return pa < pb;
        return st.in.conj_of(a) < st.in.conj_of(b);
    });
    st.rebuild();

    std::set<std::tuple<Mask, SignedEdgeLabel, Mask>> processed;

    for (int round = 0; round < caps.max_rounds; ++round) {
        bool reversed_something = false;
        for (Mask k : st.universe) {
            for (const auto& r : st.roles) {
                for (Mask k2 : st.universe) {
                    if (processed.count({k, r, k2})) continue;
                    if (!st.edge(k, r, k2)) continue;
                    if (st.edge(k2, r.inverse(), k)) continue;  // reverse already present
                    // BFS for a path from k2 back to k.
                    std::map<Mask, std::pair<Mask, SignedEdgeLabel>> pred;
                    std::deque<Mask> work{k2};
                    pred[k2] = {k2, r};
                    bool found = (k2 == k);
                    while (!work.empty() && !found) {
                        Mask cur = work.front();
                        work.pop_front();
                        for (const auto& [rr, nxt] : st.edge_successors(cur)) {
                            if (pred.count(nxt)) continue;
                            pred[nxt] = {cur, rr};
                            if (nxt == k) {
                                found = true;
                                break;
                            }
                            work.push_back(nxt);
                        }
                    }
                    if (!found) continue;

                    // Assemble the finmod cycle K_1=k, R_1=r, K_2=k2, ..., K_n=k.
                    std::vector<Mask> nodes{k, k2};
                    std::vector<SignedEdgeLabel> cycle_roles{r};
                    if (k2 != k) {
                        std::vector<Mask> back;
                        std::vector<SignedEdgeLabel> back_roles;
                        Mask cur = k;
                        while (cur != k2) {
                            auto [prev, rr] = pred.at(cur);
                            back.push_back(cur);
                            back_roles.push_back(rr);
                            cur = prev;
                        }
                        std::reverse(back.begin(), back.end());
                        std::reverse(back_roles.begin(), back_roles.end());
                        for (std::size_t i = 0; i < back.size(); ++i) {
                            cycle_roles.push_back(back_roles[i]);
                            nodes.push_back(back[i]);
                        }
                    }

                    // Decisions are made against the snapshot the cycle was
                    // found in, then all CIs are added at once.
                    bool labels_ok = true;
                    std::vector<Mask> label_nodes;
                    for (Mask kn : nodes) {
                        Mask sl = kn & st.schema_mask;
                        if (__builtin_popcountll(sl) != 1) {
                            labels_ok = false;
                            break;
                        }
                        label_nodes.push_back(sl);
                    }
                    bool add_label_cycle = false;
                    if (labels_ok) {
                        bool cycle_satisfiable = triple_satisfiable(
                            st.t, st.in.conj_of(nodes[0]), cycle_roles[0], st.in.conj_of(nodes[1]),
                            engine);
                        if (cycle_satisfiable) {
                            add_label_cycle = true;
                            for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
                                if (!st.edge(label_nodes[i], cycle_roles[i], label_nodes[i + 1])) {
                                    add_label_cycle = false;
                                    break;
                                }
                        }
                    }

                    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
                        st.t.add(ConceptInclusion::exists(st.in.conj_of(nodes[i + 1]),
                                                          cycle_roles[i].inverse(),
                                                          st.in.conj_of(nodes[i])));
                        st.t.add(ConceptInclusion::atmost1(st.in.conj_of(nodes[i]), cycle_roles[i],
                                                           st.in.conj_of(nodes[i + 1])));
                    }
                    if (add_label_cycle) {
                        for (std::size_t i = 0; i + 1 < label_nodes.size(); ++i) {
                            st.t.add(ConceptInclusion::exists(st.in.conj_of(label_nodes[i + 1]),
                                                              cycle_roles[i].inverse(),
                                                              st.in.conj_of(label_nodes[i])));
                            st.t.add(ConceptInclusion::atmost1(st.in.conj_of(label_nodes[i]),
                                                               cycle_roles[i],
                                                               st.in.conj_of(label_nodes[i + 1])));
                        }
                    }

                    st.t = reduce_replace_only(st.t, s);
                    st.rebuild();
                    processed.insert({k, r, k2});
                    reversed_something = true;
                    break;
                }
                if (reversed_something) break;
            }
            if (reversed_something) break;
        }
        if (!reversed_something) return st.t;
    }
    throw CapExceededError("completion did not reach a fixpoint within the round cap");
}

}  // namespace gta

#include "oracles.hpp"

#include <algorithm>
#include <deque>

namespace gta::testing {

namespace {
// Extend every path in the frontier by one step (edge in either direction or
// a node test).
struct PathState {
    NodeId at;
    std::vector<Symbol> word;
};
}  // namespace

std::set<std::pair<NodeId, NodeId>> eval_atom_by_paths(const PathExpr::Ptr& e, const Graph& g,
                                                       int max_len) {
    std::set<std::pair<NodeId, NodeId>> out;
    for (const auto& u : g.nodes()) {
        std::deque<PathState> work{{u, {}}};
        while (!work.empty()) {
            PathState st = std::move(work.front());
            work.pop_front();
            if (e->matches(st.word)) out.insert({u, st.at});
            if (static_cast<int>(st.word.size()) >= max_len) continue;
            for (const auto& l : g.labels_of(st.at)) {
                PathState nxt = st;
                nxt.word.push_back(Symbol{true, l, false});
                work.push_back(std::move(nxt));
            }
            for (const auto& r : g.edge_label_universe()) {
                for (bool inv : {false, true}) {
                    for (const auto& v : g.successors(st.at, {r, inv})) {
                        PathState nxt = st;
                        nxt.word.push_back(Symbol{false, r, inv});
                        nxt.at = v;
                        work.push_back(std::move(nxt));
                    }
                }
            }
        }
    }
    return out;
}

std::vector<std::vector<Symbol>> enumerate_words(const std::vector<Symbol>& alphabet,
                                                 int max_len) {
    std::vector<std::vector<Symbol>> out{{}};
    std::vector<std::vector<Symbol>> frontier{{}};
    for (int len = 1; len <= max_len; ++len) {
        std::vector<std::vector<Symbol>> next;
        for (const auto& w : frontier)
            for (const auto& s : alphabet) {
                auto w2 = w;
                w2.push_back(s);
                next.push_back(w2);
            }
        out.insert(out.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    return out;
}

PathExpr::Ptr random_expr(Rng& rng, const std::vector<std::string>& node_labels,
                          const std::vector<std::string>& edge_labels, int depth) {
    int leaf_kinds = 2 + (node_labels.empty() ? 0 : 1) + (edge_labels.empty() ? 0 : 2);
    if (depth <= 0 || pick(rng, 0, 3) == 0) {
        int k = pick(rng, 0, leaf_kinds - 1);
        if (k == 0) return PathExpr::epsilon();
        if (k == 1) return PathExpr::empty();
        if (k == 2 && !node_labels.empty()) return PathExpr::node_test(pick_one(rng, node_labels));
        if (!edge_labels.empty())
            return PathExpr::step({pick_one(rng, edge_labels), pick(rng, 0, 1) == 1});
        return PathExpr::epsilon();
    }
    switch (pick(rng, 0, 2)) {
        case 0:
            return PathExpr::concat(random_expr(rng, node_labels, edge_labels, depth - 1),
                                    random_expr(rng, node_labels, edge_labels, depth - 1));
        case 1:
            return PathExpr::alt(random_expr(rng, node_labels, edge_labels, depth - 1),
                                 random_expr(rng, node_labels, edge_labels, depth - 1));
        default: return PathExpr::star(random_expr(rng, node_labels, edge_labels, depth - 1));
    }
}

Graph random_graph(Rng& rng, int max_nodes, const std::vector<std::string>& node_labels,
                   const std::vector<std::string>& edge_labels) {
    Graph g;
    int n = pick(rng, 1, max_nodes);
    std::vector<NodeId> nodes;
    for (int i = 0; i < n; ++i) {
        NodeId id = NodeId::atomic("n" + std::to_string(i));
        g.add_node(id);
        nodes.push_back(id);
        for (const auto& l : node_labels)
            if (pick(rng, 0, 2) == 0) g.add_label(id, l);
    }
    for (const auto& u : nodes)
        for (const auto& v : nodes)
            for (const auto& r : edge_labels)
                if (pick(rng, 0, 3) == 0) g.add_edge(u, r, v);
    return g;
}

Schema random_schema(Rng& rng, const std::vector<std::string>& node_labels,
                     const std::vector<std::string>& edge_labels) {
    Schema s({node_labels.begin(), node_labels.end()}, {edge_labels.begin(), edge_labels.end()});
    const Multiplicity ms[] = {Multiplicity::Opt, Multiplicity::One, Multiplicity::Plus,
                               Multiplicity::Any, Multiplicity::None};
    for (const auto& a : node_labels)
        for (const auto& r : edge_labels)
            for (bool inv : {false, true})
                for (const auto& b : node_labels) {
                    // Bias toward None so constraints stay sparse, like the
                    // figure convention.
                    int k = pick(rng, 0, 7);
                    Multiplicity m = k < 5 ? ms[k] : Multiplicity::None;
                    s.set_delta(a, {r, inv}, b, m);
                }
    return s;
}

C2rpq random_acyclic_connected_query(Rng& rng, const std::vector<std::string>& node_labels,
                                     const std::vector<std::string>& edge_labels, int max_atoms,
                                     int expr_depth) {
    C2rpq q;
    int atoms = pick(rng, 1, max_atoms);
    std::vector<std::string> vars{"v0"};
    q.exist_vars.insert("v0");
    for (int i = 0; i < atoms; ++i) {
        PathExpr::Ptr e = random_expr(rng, node_labels, edge_labels, expr_depth);
        if (i == 0 && pick(rng, 0, 2) == 0) {
            // Trivial self-atom on the first variable.
            auto k = e->kind();
            if (k != PathExpr::Kind::Empty && k != PathExpr::Kind::Epsilon &&
                k != PathExpr::Kind::NodeTest)
                e = node_labels.empty() ? PathExpr::epsilon()
                                        : PathExpr::node_test(pick_one(rng, node_labels));
            q.atoms.push_back({e, "v0", "v0"});
            continue;
        }
        // Attach a fresh variable to the existing tree to stay acyclic and
        // connected.
        std::string old_var = pick_one(rng, vars);
        std::string new_var = "v" + std::to_string(vars.size());
        vars.push_back(new_var);
        q.exist_vars.insert(new_var);
        if (pick(rng, 0, 1) == 0)
            q.atoms.push_back({e, old_var, new_var});
        else
            q.atoms.push_back({e, new_var, old_var});
    }
    return q;
}

std::optional<Graph> sample_conforming(Rng& rng, const Schema& s, int max_nodes) {
    if (s.node_labels().empty()) return Graph{};
    std::vector<std::string> labels(s.node_labels().begin(), s.node_labels().end());
    Graph g;
    std::vector<NodeId> nodes;
    int seed_nodes = pick(rng, 1, std::max(1, max_nodes / 2));
    for (int i = 0; i < seed_nodes; ++i) {
        NodeId id = NodeId::atomic("n" + std::to_string(i));
        g.add_label(id, pick_one(rng, labels));
        nodes.push_back(id);
    }

    auto label_of = [&](const NodeId& u) { return *g.labels_of(u).begin(); };
    // Repair loop: fix at-least deficits by adding edges (to an existing or a
    // fresh node) without breaking at-most constraints; bail out on a cap.
    for (int round = 0; round < 200; ++round) {
        bool deficit = false;
        for (const auto& u : std::vector<NodeId>(nodes.begin(), nodes.end())) {
            std::string a = label_of(u);
            for (const auto& r : s.signed_edge_labels()) {
                for (const auto& b : s.node_labels()) {
                    Multiplicity m = s.delta(a, r, b);
                    std::size_t count = 0;
                    for (const auto& v : g.successors(u, r))
                        if (g.has_label(v, b)) ++count;
                    if (multiplicity_allows(m, count)) continue;
                    if (count > 0 && !multiplicity_allows(m, count)) {
                        if (m == Multiplicity::None || count > 1) return std::nullopt;  // overshoot
                    }
                    deficit = true;
                    // Candidate targets: existing b-nodes whose reverse
                    // constraint tolerates one more, else a fresh node.
                    std::vector<NodeId> cands;
                    for (const auto& v : nodes) {
                        if (label_of(v) != b) continue;
                        if (g.successors(u, r).count(v)) continue;
                        std::size_t rev = 0;
                        for (const auto& w : g.successors(v, r.inverse()))
                            if (g.has_label(w, a)) ++rev;
                        if (multiplicity_allows(s.delta(b, r.inverse(), a), rev + 1) ||
                            s.delta(b, r.inverse(), a) == Multiplicity::Plus ||
                            s.delta(b, r.inverse(), a) == Multiplicity::Any)
                            cands.push_back(v);
                    }
                    NodeId tgt;
                    bool fresh = cands.empty() || (static_cast<int>(nodes.size()) < max_nodes &&
                                                   pick(rng, 0, 1) == 0);
                    if (fresh && static_cast<int>(nodes.size()) < max_nodes) {
                        tgt = NodeId::atomic("n" + std::to_string(nodes.size()));
                        g.add_label(tgt, b);
                        nodes.push_back(tgt);
                    } else if (!cands.empty()) {
                        tgt = pick_one(rng, cands);
                    } else {
                        return std::nullopt;
                    }
                    if (!r.inverted)
                        g.add_edge(u, r.label, tgt);
                    else
                        g.add_edge(tgt, r.label, u);
                }
            }
        }
        if (!deficit) break;
    }
    return conforms(g, s).ok ? std::optional<Graph>(g) : std::nullopt;
}

}  // namespace gta::testing

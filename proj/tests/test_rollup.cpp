#include <algorithm>

#include "doctest.h"
#include "gta/rollup.hpp"
#include "oracles.hpp"

using namespace gta;

namespace {
// Q0 of Example rollingup: exists x0..x3. (a.b*.c)(x2,x1), (A)(x3,x1),
// (a-)(x1,x0).
C2rpq q0_rollingup() {
    C2rpq q;
    q.exist_vars = {"x0", "x1", "x2", "x3"};
    q.atoms.push_back(
        {PathExpr::concat(PathExpr::step({"a", false}),
                          PathExpr::concat(PathExpr::star(PathExpr::step({"b", false})),
                                           PathExpr::step({"c", false}))),
         "x2", "x1"});
    q.atoms.push_back({PathExpr::node_test("A"), "x3", "x1"});
    q.atoms.push_back({PathExpr::step({"a", true}), "x1", "x0"});
    return q;
}

// The paper's 9 CIs for Q0 with states named p0..p6.
std::vector<ConceptInclusion> paper_cis() {
    return {
        ConceptInclusion::subsume({}, "p0"),
        ConceptInclusion::forall({"p0"}, {"a", false}, {"p1"}),
        ConceptInclusion::forall({"p1"}, {"b", false}, {"p1"}),
        ConceptInclusion::forall({"p1"}, {"c", false}, {"p2"}),
        ConceptInclusion::subsume({}, "p3"),
        ConceptInclusion::subsume({"A", "p3"}, "p4"),
        ConceptInclusion::subsume({"p2", "p4"}, "p5"),
        ConceptInclusion::forall({"p5"}, {"a", true}, {"p6"}),
        ConceptInclusion::bottom({"p6"}),
    };
}

// Does a bijection from `from_states` into `to_states` map cis1 onto cis2?
bool match_up_to_renaming(const std::vector<ConceptInclusion>& cis1,
                          const std::set<ConceptInclusion>& cis2,
                          std::vector<std::string> from_states,
                          std::vector<std::string> to_states,
                          std::map<std::string, std::string>& sigma) {
    if (cis2.size() != cis1.size()) return false;
    auto rename_conj = [&](const Conjunction& k) {
        Conjunction out;
        for (const auto& a : k) {
            auto it = sigma.find(a);
            out.insert(it == sigma.end() ? a : it->second);
        }
        return out;
    };
    auto rename = [&](ConceptInclusion ci) {
        ci.lhs = rename_conj(ci.lhs);
        ci.rhs = rename_conj(ci.rhs);
        if (!ci.subsumer.empty()) {
            auto it = sigma.find(ci.subsumer);
            if (it != sigma.end()) ci.subsumer = it->second;
        }
        return ci;
    };
    if (from_states.empty()) {
        for (const auto& ci : cis1)
            if (!cis2.count(rename(ci))) return false;
        return true;
    }
    std::string s = from_states.back();
    from_states.pop_back();
    for (std::size_t i = 0; i < to_states.size(); ++i) {
        sigma[s] = to_states[i];
        auto rest = to_states;
        rest.erase(rest.begin() + i);
        if (match_up_to_renaming(cis1, cis2, from_states, rest, sigma)) return true;
    }
    sigma.erase(s);
    return false;
}
}  // namespace

TEST_CASE("tree_decompose: single atom and error cases") {
    C2rpq single;
    single.exist_vars = {"x", "y"};
    single.atoms.push_back({PathExpr::step({"a", false}), "x", "y"});
    QueryTree t = tree_decompose(single);
    CHECK(t.root_atoms.size() == 1);
    CHECK(t.nodes.size() == 1);

    C2rpq disconnected;
    disconnected.exist_vars = {"x", "y"};
    disconnected.atoms.push_back({PathExpr::node_test("A"), "x", "x"});
    disconnected.atoms.push_back({PathExpr::node_test("A"), "y", "y"});
    CHECK_THROWS_AS(tree_decompose(disconnected), Error);

    C2rpq cyclic;
    cyclic.exist_vars = {"x"};
    cyclic.atoms.push_back({PathExpr::step({"a", false}), "x", "x"});
    CHECK_THROWS_AS(tree_decompose(cyclic), Error);

    C2rpq nonbool;
    nonbool.free_vars = {"x"};
    nonbool.atoms.push_back({PathExpr::node_test("A"), "x", "x"});
    CHECK_THROWS_AS(tree_decompose(nonbool), Error);
}

TEST_CASE("tree_decompose roots Q0 so that no atom needs reversal") {
    QueryTree t = tree_decompose(q0_rollingup());
    CHECK(t.root_var == "x0");
    for (const auto& n : t.nodes) CHECK_FALSE(n.reversed);
    REQUIRE(t.root_atoms.size() == 1);
    // The root atom is a-; below its child hang the other two.
    CHECK(t.nodes[t.root_atoms[0]].children.size() == 2);
}

TEST_CASE("rollup reproduces the paper's nine CIs up to state renaming") {
    RollupResult r = rollup(Uc2rpq{{q0_rollingup()}});
    REQUIRE(r.tbox.cis().size() == 9);
    REQUIRE(r.gamma_q.size() == 7);

    std::vector<std::string> mine(r.gamma_q.begin(), r.gamma_q.end());
    std::map<std::string, std::string> sigma;
    bool ok = match_up_to_renaming(paper_cis(), r.tbox.cis(),
                                   {"p0", "p1", "p2", "p3", "p4", "p5", "p6"}, mine, sigma);
    CHECK(ok);
}

TEST_CASE("rollup of a never-satisfiable query is satisfied by every graph") {
    C2rpq q;
    q.exist_vars = {"x"};
    q.atoms.push_back({PathExpr::empty(), "x", "x"});
    RollupResult r = rollup(Uc2rpq{{q}});
    testing::Rng rng(5);
    for (int iter = 0; iter < 10; ++iter) {
        Graph g = testing::random_graph(rng, 4, {"A"}, {"a"});
        CHECK(rollup_holds(g, r));
    }
}

TEST_CASE("rollup of r.s+.r: denial fires exactly when the query holds") {
    C2rpq q;
    q.exist_vars = {"x", "y"};
    q.atoms.push_back(
        {PathExpr::concat(PathExpr::step({"r", false}),
                          PathExpr::concat(PathExpr::concat(PathExpr::step({"s", false}),
                                                            PathExpr::star(PathExpr::step(
                                                                {"s", false}))),
                                           PathExpr::step({"r", false}))),
         "x", "y"});
    RollupResult roll = rollup(Uc2rpq{{q}});

    // No Exists / AtMostOne in rollup output.
    for (const auto& ci : roll.tbox.cis()) {
        CHECK(ci.kind != ConceptInclusion::Kind::Exists);
        CHECK(ci.kind != ConceptInclusion::Kind::AtMostOne);
    }

    // G0 of Fig. 3 satisfies the query, so the TBox must be violated.
    Graph g0;
    std::vector<NodeId> xs;
    for (int i = 0; i < 5; ++i) xs.push_back(NodeId::atomic("x" + std::to_string(i)));
    for (int i = 0; i < 5; ++i) {
        g0.add_label(xs[i], "A");
        g0.add_edge(xs[i], "s", xs[(i + 1) % 5]);
    }
    g0.add_edge(xs[4], "r", xs[4]);
    REQUIRE(satisfied(q, g0));
    CHECK_FALSE(rollup_holds(g0, roll));

    // The G_infinity prefix without the closing r does not satisfy it.
    Graph chain;
    for (int i = 0; i < 4; ++i) chain.add_label(xs[i], "A");
    chain.add_edge(xs[0], "r", xs[0]);
    for (int i = 0; i + 1 < 4; ++i) chain.add_edge(xs[i], "s", xs[i + 1]);
    REQUIRE_FALSE(satisfied(q, chain));
    CHECK(rollup_holds(chain, roll));
}

TEST_CASE("rollup correctness oracle on random graph/query pairs") {
    testing::Rng rng(20240402);
    std::vector<std::string> ns{"A", "B"}, es{"a", "b"};
    int hits = 0;
    for (int iter = 0; iter < 150; ++iter) {
        C2rpq q = testing::random_acyclic_connected_query(rng, ns, es, 3, 2);
        Graph g = testing::random_graph(rng, 5, ns, es);
        RollupResult r = rollup(Uc2rpq{{q}});
        bool sat = satisfied(q, g);
        if (sat) ++hits;
        CHECK(rollup_holds(g, r) == !sat);
    }
    CHECK(hits > 10);  // the sample exercises both outcomes
}

TEST_CASE("gamma_q grows linearly with the regex size") {
    testing::Rng rng(77);
    for (int iter = 0; iter < 20; ++iter) {
        C2rpq q = testing::random_acyclic_connected_query(rng, {"A"}, {"a", "b"}, 3, 3);
        RollupResult r = rollup(Uc2rpq{{q}});
        int total_size = 0;
        for (const auto& a : q.atoms) total_size += a.expr->size();
        CHECK(static_cast<int>(r.gamma_q.size()) <= 2 * total_size + 2);
    }
}

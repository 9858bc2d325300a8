#include "doctest.h"
#include "gta/transform.hpp"
#include "oracles.hpp"

using namespace gta;

namespace {
// The medical transformation T0 (Example transformation-definition).
Transformation medical_t0() {
    auto ident_rule = [](const std::string& label) {
        C2rpq body;
        body.free_vars = {"x"};
        body.atoms.push_back({PathExpr::node_test(label), "x", "x"});
        return NodeRule{label, {"x"}, body};
    };
    auto edge_copy = [](const std::string& r, const std::string& a, const std::string& b) {
        C2rpq body;
        body.free_vars = {"x", "y"};
        body.atoms.push_back({PathExpr::step({r, false}), "x", "y"});
        return EdgeRule{r, a, {"x"}, b, {"y"}, body};
    };
    C2rpq targets_body;
    targets_body.free_vars = {"x", "y"};
    targets_body.atoms.push_back(
        {PathExpr::concat(PathExpr::step({"designTarget", false}),
                          PathExpr::star(PathExpr::step({"crossReacting", false}))),
         "x", "y"});
    return Transformation(
        {ident_rule("Vaccine"), ident_rule("Antigen"), ident_rule("Pathogen")},
        {edge_copy("designTarget", "Vaccine", "Antigen"),
         EdgeRule{"targets", "Vaccine", {"x"}, "Antigen", {"y"}, targets_body},
         edge_copy("exhibits", "Pathogen", "Antigen")});
}
}  // namespace

TEST_CASE("transformation validation") {
    // One constructor per node label: conflicting arities are rejected.
    C2rpq b1;
    b1.free_vars = {"x"};
    b1.atoms.push_back({PathExpr::node_test("A"), "x", "x"});
    C2rpq b2;
    b2.free_vars = {"x", "y"};
    b2.atoms.push_back({PathExpr::step({"r", false}), "x", "y"});
    CHECK_THROWS_AS(Transformation({NodeRule{"A", {"x"}, b1}, NodeRule{"A", {"x", "y"}, b2}}, {}),
                    Error);

    // Cyclic bodies are rejected.
    C2rpq cyc;
    cyc.free_vars = {"x"};
    cyc.atoms.push_back({PathExpr::step({"r", false}), "x", "x"});
    CHECK_THROWS_AS(Transformation({NodeRule{"A", {"x"}, cyc}}, {}), Error);
}

TEST_CASE("apply: empty input yields empty output") {
    CHECK(apply(medical_t0(), Graph{}) == Graph{});
}

TEST_CASE("apply: crossReacting* forces both direct and derived targets") {
    Graph g;
    auto v = NodeId::atomic("v");
    auto a1 = NodeId::atomic("a1");
    auto a2 = NodeId::atomic("a2");
    g.add_label(v, "Vaccine");
    g.add_label(a1, "Antigen");
    g.add_label(a2, "Antigen");
    g.add_edge(v, "designTarget", a1);
    g.add_edge(a1, "crossReacting", a2);

    Graph out = apply(medical_t0(), g);
    auto fv = NodeId::constructed("Vaccine", {v});
    auto fa1 = NodeId::constructed("Antigen", {a1});
    auto fa2 = NodeId::constructed("Antigen", {a2});
    CHECK(out.edges().count({fv, "targets", fa1}));
    CHECK(out.edges().count({fv, "targets", fa2}));
    CHECK(out.has_label(fv, "Vaccine"));
    CHECK(out.has_label(fa2, "Antigen"));
}

TEST_CASE("apply: edge rule alone leaves endpoints unlabeled") {
    C2rpq body;
    body.free_vars = {"x", "y"};
    body.atoms.push_back({PathExpr::step({"r", false}), "x", "y"});
    Transformation t({}, {EdgeRule{"r", "A", {"x"}, "B", {"y"}, body}});

    Graph g;
    g.add_edge(NodeId::atomic("u"), "r", NodeId::atomic("v"));
    Graph out = apply(t, g);
    CHECK(out.nodes().size() == 2);
    for (const auto& n : out.nodes()) CHECK(out.labels_of(n).empty());
}

TEST_CASE("apply is deterministic and repeatable") {
    testing::Rng rng(3);
    for (int iter = 0; iter < 10; ++iter) {
        Graph g = testing::random_graph(rng, 5, {"Vaccine", "Antigen", "Pathogen"},
                                        {"designTarget", "crossReacting", "exhibits"});
        Graph a = apply(medical_t0(), g);
        Graph b = apply(medical_t0(), g);
        CHECK(a == b);
    }
}

TEST_CASE("apply: every output node id is a constructor term") {
    testing::Rng rng(5);
    Graph g = testing::random_graph(rng, 5, {"Vaccine", "Antigen", "Pathogen"},
                                    {"designTarget", "crossReacting", "exhibits"});
    Graph out = apply(medical_t0(), g);
    std::set<std::string> heads = medical_t0().gamma();
    for (const auto& n : out.nodes()) {
        CHECK(n.is_constructed());
        CHECK(heads.count(n.name()));
    }
}

TEST_CASE("grouped queries of the medical example") {
    Transformation t0 = medical_t0();

    Uc2rpq qv = grouped_node_query(t0, "Vaccine");
    REQUIRE(qv.disjuncts.size() == 1);
    CHECK(qv.disjuncts[0].atoms.size() == 1);
    CHECK(qv.disjuncts[0].atoms[0].expr->kind() == PathExpr::Kind::NodeTest);
    CHECK(qv.disjuncts[0].atoms[0].expr->label() == "Vaccine");

    Uc2rpq qt = grouped_edge_query(t0, "Vaccine", {"targets", false}, "Antigen");
    REQUIRE(qt.disjuncts.size() == 1);
    CHECK(qt.disjuncts[0].free_vars == std::vector<std::string>{"x", "y"});
    CHECK(qt.disjuncts[0].atoms[0].expr->to_string() == "designTarget . crossReacting*");

    // Inverse grouping swaps the argument roles.
    Uc2rpq qti = grouped_edge_query(t0, "Antigen", {"targets", true}, "Vaccine");
    REQUIRE(qti.disjuncts.size() == 1);
    CHECK(qti.disjuncts[0].free_vars == std::vector<std::string>{"y", "x"});

    // Missing group: the all-empty query of the right arity.
    Uc2rpq none = grouped_edge_query(t0, "Vaccine", {"exhibits", false}, "Antigen");
    REQUIRE(none.disjuncts.size() == 1);
    CHECK(none.disjuncts[0].atoms[0].expr->kind() == PathExpr::Kind::Empty);
}

TEST_CASE("trim removes unsatisfiable-bodied rules and keeps the rest") {
    Transformation t0 = medical_t0();
    // Stand-in emptiness check: a body is unsatisfiable when it mentions an
    // edge label missing from the schema (enough for this unit test; the
    // full pipeline check lives in the containment module).
    auto engine = [](const C2rpq& body, const Schema& s) {
        for (const auto& l : body.edge_labels())
            if (!s.edge_labels().count(l)) return false;
        for (const auto& l : body.node_labels())
            if (!s.node_labels().count(l)) return false;
        return true;
    };

    Schema s0({"Vaccine", "Antigen", "Pathogen"}, {"designTarget", "crossReacting", "exhibits"});
    Transformation kept = trim(t0, s0, engine);
    CHECK(kept.node_rules().size() == 3);
    CHECK(kept.edge_rules().size() == 3);

    Schema tiny({"Vaccine"}, {});
    Transformation trimmed = trim(t0, tiny, engine);
    CHECK(trimmed.node_rules().size() == 1);
    CHECK(trimmed.edge_rules().empty());
    CHECK(trimmed.gamma() == std::set<std::string>{"Vaccine"});
    CHECK(trimmed.sigma().empty());

    CHECK(trim(Transformation{}, s0, engine).node_rules().empty());
}

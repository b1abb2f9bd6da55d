#include <random>

#include "doctest.h"
#include "lpqa/graph.hpp"

using namespace lpqa;

namespace {

// Best-run parameter values used as a fixed reference configuration.
ThetaParams reference_theta() {
    ThetaParams t;
    t.qa = 0.10;
    t.qg = 0.98;
    t.aa = 0.01;
    t.ga = 0.14;
    t.gg = -0.99;
    t.ar = 0.03;
    t.gr = 0.36;
    t.ew = 0.80;
    t.vw = 0.76;
    return t;
}

RetrievedFact retrieved(std::string id, TermSet terms, FactKind kind, double r) {
    RetrievedFact rf;
    rf.fact.id = std::move(id);
    rf.fact.kind = kind;
    rf.fact.terms = std::move(terms);
    rf.relevance = r;
    return rf;
}

ThetaParams random_theta(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    ThetaParams t;
    t.vw = uni(rng); t.ew = uni(rng); t.gr = uni(rng); t.ar = uni(rng);
    t.aa = uni(rng); t.ga = uni(rng); t.qg = uni(rng); t.qa = uni(rng);
    t.gg = -uni(rng);
    return t;
}

}  // namespace

TEST_CASE("node_weight cases") {
    const ThetaParams t = reference_theta();
    CHECK(node_weight(NodeKind::Question, 0.7, t) == 0.0);
    CHECK(node_weight(NodeKind::Grounding, 0.5, t) == doctest::Approx(0.18).epsilon(1e-12));
    CHECK(node_weight(NodeKind::Abstract, 1.0, t) == doctest::Approx(0.03).epsilon(1e-12));
}

TEST_CASE("edge_weight cases and the ceiling rule") {
    const ThetaParams t = reference_theta();
    CHECK(edge_weight(NodeKind::Grounding, NodeKind::Abstract, 0.25, t) ==
          doctest::Approx(0.14).epsilon(1e-12));
    CHECK(edge_weight(NodeKind::Grounding, NodeKind::Grounding, 0.5, t) ==
          doctest::Approx(-0.495).epsilon(1e-12));
    CHECK(edge_weight(NodeKind::Question, NodeKind::Abstract, 0.2, t) ==
          doctest::Approx(0.02).epsilon(1e-12));
    // Any positive overlap on question-grounding edges yields exactly qg.
    for (double o : {0.01, 0.33, 0.99, 1.0}) {
        CHECK(edge_weight(NodeKind::Question, NodeKind::Grounding, o, t) == t.qg);
        CHECK(edge_weight(NodeKind::Grounding, NodeKind::Abstract, o, t) == t.ga);
    }
}

TEST_CASE("edge_weight is symmetric in its endpoints") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uni(0.01, 1.0);
    const NodeKind kinds[] = {NodeKind::Question, NodeKind::Grounding,
                              NodeKind::Abstract};
    for (int i = 0; i < 200; ++i) {
        const ThetaParams t = random_theta(rng);
        const NodeKind a = kinds[rng() % 3];
        const NodeKind b = kinds[rng() % 3];
        const double o = uni(rng);
        CHECK(edge_weight(a, b, o, t) == edge_weight(b, a, o, t));
    }
}

TEST_CASE("sign structure under any valid theta") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> uni(0.01, 1.0);
    for (int i = 0; i < 200; ++i) {
        const ThetaParams t = random_theta(rng);
        const double o = uni(rng);
        CHECK(edge_weight(NodeKind::Grounding, NodeKind::Grounding, o, t) <= 0.0);
        CHECK(edge_weight(NodeKind::Question, NodeKind::Grounding, o, t) >= 0.0);
        CHECK(edge_weight(NodeKind::Question, NodeKind::Abstract, o, t) >= 0.0);
        CHECK(edge_weight(NodeKind::Grounding, NodeKind::Abstract, o, t) >= 0.0);
        CHECK(edge_weight(NodeKind::Abstract, NodeKind::Abstract, o, t) >= 0.0);
    }
}

TEST_CASE("build_candidate_graph structure") {
    TermConfig cfg;
    cfg.stopwords = {"a", "is", "an", "the"};
    Question q;
    q.id = "q";
    q.stem = "a stick rubbed makes";
    q.choices = {"heat"};

    SUBCASE("no facts -> single question node, no edges") {
        const auto g = build_candidate_graph(q, 0, {}, {}, reference_theta(), cfg);
        CHECK(g.nodes.size() == 1);
        CHECK(g.edges.empty());
        CHECK(g.nodes[0].kind == NodeKind::Question);
        CHECK(g.nodes[0].weight == 0.0);
    }

    SUBCASE("facts sharing no terms are isolated") {
        const auto g = build_candidate_graph(
            q, 0,
            {retrieved("g1", {"zebra", "stripes"}, FactKind::Grounding, 1.0)},
            {retrieved("a1", {"quark", "lepton"}, FactKind::Abstract, 1.0)},
            reference_theta(), cfg);
        CHECK(g.nodes.size() == 3);
        CHECK(g.edges.empty());
    }

    SUBCASE("three-node chain has the hand-enumerated edges") {
        // grounding shares "stick" with the question and "object" with the
        // abstract fact; the abstract fact shares "heat" with the question.
        const auto g = build_candidate_graph(
            q, 0, {retrieved("g1", {"stick", "object"}, FactKind::Grounding, 1.0)},
            {retrieved("a1", {"object", "heat", "friction"}, FactKind::Abstract, 0.5)},
            reference_theta(), cfg);
        REQUIRE(g.nodes.size() == 3);
        CHECK(g.edges.size() == 3);
        int incident_to_grounding = 0;
        for (const auto& e : g.edges)
            if (e.u == 1 || e.v == 1) ++incident_to_grounding;
        CHECK(incident_to_grounding == 2);
    }
}

TEST_CASE("node id assignment is deterministic by input order") {
    TermConfig cfg;
    Question q;
    q.id = "q";
    q.stem = "x";
    q.choices = {"y"};
    const auto grounding = std::vector<RetrievedFact>{
        retrieved("g1", {"x"}, FactKind::Grounding, 0.9),
        retrieved("g2", {"y"}, FactKind::Grounding, 0.8)};
    const auto abstract_facts = std::vector<RetrievedFact>{
        retrieved("a1", {"x", "y"}, FactKind::Abstract, 1.0)};
    const auto g1 = build_candidate_graph(q, 0, grounding, abstract_facts,
                                          reference_theta(), cfg);
    const auto g2 = build_candidate_graph(q, 0, grounding, abstract_facts,
                                          reference_theta(), cfg);
    REQUIRE(g1.nodes.size() == 4);
    CHECK(g1.nodes[1].fact_id == "g1");
    CHECK(g1.nodes[2].fact_id == "g2");
    CHECK(g1.nodes[3].fact_id == "a1");
    REQUIRE(g1.edges.size() == g2.edges.size());
    for (std::size_t i = 0; i < g1.edges.size(); ++i) {
        CHECK(g1.edges[i].u == g2.edges[i].u);
        CHECK(g1.edges[i].v == g2.edges[i].v);
        CHECK(g1.edges[i].weight == g2.edges[i].weight);
    }
}

TEST_CASE("reweight matches stored weights and preserves raw overlaps") {
    TermConfig cfg;
    Question q;
    q.id = "q";
    q.stem = "friction heat";
    q.choices = {"object"};
    auto g = build_candidate_graph(
        q, 0, {retrieved("g1", {"object", "stick"}, FactKind::Grounding, 0.6)},
        {retrieved("a1", {"friction", "heat"}, FactKind::Abstract, 0.4)},
        reference_theta(), cfg);
    std::mt19937_64 rng(3);
    const ThetaParams other = random_theta(rng);
    reweight(g, other);
    for (const auto& n : g.nodes)
        CHECK(n.weight == node_weight(n.kind, n.relevance, other));
    for (const auto& e : g.edges) {
        CHECK(e.raw_overlap > 0.0);
        CHECK(e.weight ==
              edge_weight(g.nodes[e.u].kind, g.nodes[e.v].kind, e.raw_overlap, other));
    }
}

TEST_CASE("ablation substitutions are structural") {
    TermConfig cfg;
    Question q;
    q.id = "q";
    q.stem = "friction heat";
    q.choices = {"object"};
    const auto grounding = std::vector<RetrievedFact>{
        retrieved("g1", {"object", "stick"}, FactKind::Grounding, 0.6)};
    const auto abstract_facts = std::vector<RetrievedFact>{
        retrieved("a1", {"friction", "heat", "object"}, FactKind::Abstract, 0.4)};
    const ThetaParams t = reference_theta();

    SUBCASE("no_overlap treats O as 1 on existing edges") {
        AblationFlags flags;
        flags.no_overlap = true;
        const auto g = build_candidate_graph(q, 0, grounding, abstract_facts, t, cfg,
                                             flags);
        for (const auto& e : g.edges)
            CHECK(e.weight ==
                  edge_weight(g.nodes[e.u].kind, g.nodes[e.v].kind, 1.0, t));
    }

    SUBCASE("no_relevance treats R as 1") {
        AblationFlags flags;
        flags.no_relevance = true;
        const auto g = build_candidate_graph(q, 0, grounding, abstract_facts, t, cfg,
                                             flags);
        CHECK(g.nodes[1].weight == doctest::Approx(t.gr));
        CHECK(g.nodes[2].weight == doctest::Approx(t.ar));
    }

    SUBCASE("no_grouping treats every fact as abstract") {
        AblationFlags flags;
        flags.no_grouping = true;
        const auto g = build_candidate_graph(q, 0, grounding, abstract_facts, t, cfg,
                                             flags);
        CHECK(g.nodes[1].kind == NodeKind::Abstract);
        CHECK(g.nodes[2].kind == NodeKind::Abstract);
    }

    SUBCASE("no_tuning forces the sign-pattern theta") {
        AblationFlags flags;
        flags.no_tuning = true;
        const auto g = build_candidate_graph(q, 0, grounding, abstract_facts, t, cfg,
                                             flags);
        CHECK(g.theta.qg == 1.0);
        CHECK(g.theta.gg == -1.0);
        CHECK(g.nodes[1].weight == doctest::Approx(0.6));  // gr = 1
    }
}

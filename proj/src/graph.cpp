#include "lpqa/graph.hpp"

#include <cmath>

namespace lpqa {

bool ThetaParams::in_domain() const {
    auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
    return unit(vw) && unit(ew) && unit(gr) && unit(ar) && unit(aa) && unit(ga) &&
           unit(qg) && unit(qa) && gg >= -1.0 && gg <= 0.0;
}

double node_weight(NodeKind kind, double relevance, const ThetaParams& theta) {
    switch (kind) {
        case NodeKind::Grounding: return theta.gr * relevance;
        case NodeKind::Abstract: return theta.ar * relevance;
        case NodeKind::Question: return 0.0;
    }
    return 0.0;
}

double edge_weight(NodeKind ku, NodeKind kv, double raw_overlap,
                   const ThetaParams& theta) {
    // Order-insensitive: normalize so ku <= kv by enum order.
    if (static_cast<int>(ku) > static_cast<int>(kv)) std::swap(ku, kv);
    const double ceil_o = raw_overlap > 0.0 ? 1.0 : 0.0;
    if (ku == NodeKind::Question && kv == NodeKind::Grounding)
        return theta.qg * ceil_o;
    if (ku == NodeKind::Question && kv == NodeKind::Abstract)
        return theta.qa * raw_overlap;
    if (ku == NodeKind::Grounding && kv == NodeKind::Grounding)
        return theta.gg * raw_overlap;
    if (ku == NodeKind::Grounding && kv == NodeKind::Abstract)
        return theta.ga * ceil_o;
    return theta.aa * raw_overlap;  // abstract-abstract
}

void reweight(CandidateGraph& graph, const ThetaParams& theta) {
    graph.theta = theta;
    for (auto& n : graph.nodes) {
        const double r = graph.ablation.no_relevance && n.kind != NodeKind::Question
                             ? 1.0
                             : n.relevance;
        n.weight = node_weight(n.kind, r, theta);
    }
    for (auto& e : graph.edges) {
        const double o = graph.ablation.no_overlap ? 1.0 : e.raw_overlap;
        e.weight = edge_weight(graph.nodes[e.u].kind, graph.nodes[e.v].kind, o, theta);
    }
}

CandidateGraph build_candidate_graph(const Question& question, int choice_index,
                                     const std::vector<RetrievedFact>& grounding,
                                     const std::vector<RetrievedFact>& abstract_facts,
                                     const ThetaParams& theta, const TermConfig& cfg,
                                     const AblationFlags& ablation) {
    CandidateGraph g;
    g.ablation = ablation;

    std::vector<TermSet> terms;
    terms.push_back(extract_unique_terms(
        question.stem + " " + question.choices.at(choice_index), cfg));
    g.nodes.push_back({NodeKind::Question, "", 0.0, 0.0});

    auto add_facts = [&](const std::vector<RetrievedFact>& facts, NodeKind kind) {
        for (const auto& rf : facts) {
            if (ablation.no_grouping) kind = NodeKind::Abstract;
            g.nodes.push_back({kind, rf.fact.id, rf.relevance, 0.0});
            terms.push_back(rf.fact.terms);
        }
    };
    add_facts(grounding, NodeKind::Grounding);
    add_facts(abstract_facts, NodeKind::Abstract);

    const int n = static_cast<int>(g.nodes.size());
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            const double o = compute_overlap(terms[u], terms[v]);
            if (o > 0.0) g.edges.push_back({u, v, o, 0.0});
        }
    }

    reweight(g, ablation.no_tuning ? ThetaParams::untuned() : theta);
    return g;
}

}  // namespace lpqa

#pragma once

#include <string>
#include <vector>

#include "lpqa/bm25.hpp"

namespace lpqa {

/// The nine learnable weights. All live in [0,1] except gg in [-1,0]:
/// grounding-grounding overlap is penalized, everything else rewarded.
struct ThetaParams {
    double vw = 1.0;  // node-weight mix
    double ew = 1.0;  // edge-weight mix
    double gr = 1.0;  // grounding relevance
    double ar = 1.0;  // abstract relevance
    double aa = 1.0;  // abstract-abstract overlap
    double ga = 1.0;  // grounding-abstract overlap
    double qg = 1.0;  // question-grounding overlap
    double qa = 1.0;  // question-abstract overlap
    double gg = -1.0; // grounding-grounding overlap

    bool in_domain() const;
    /// Sign-pattern defaults used when tuning is disabled: positive-domain
    /// parameters 1, gg = -1.
    static ThetaParams untuned() { return ThetaParams{}; }
};

struct AblationFlags {
    bool no_grouping = false;           // treat every fact as abstract
    bool no_overlap = false;            // O == 1 on existing edges
    bool no_relevance = false;          // R == 1
    bool no_chaining = false;           // drop root + neighbor + edge coupling
    bool no_grounding_neighbor = false; // drop the two-neighbor rule
    bool no_tuning = false;             // force untuned theta
};

enum class NodeKind { Question, Grounding, Abstract };

struct GraphNode {
    NodeKind kind = NodeKind::Question;
    std::string fact_id;  // empty for the question node
    double relevance = 0.0;
    double weight = 0.0;  // omega_v under the current theta
};

struct GraphEdge {
    int u = 0;
    int v = 0;
    double raw_overlap = 0.0;  // O before any ablation substitution
    double weight = 0.0;       // omega_e under the current theta
};

/// Per-candidate weighted undirected graph. Node 0 is the question node
/// carrying the Q||c_i term set; facts follow in retrieval order
/// (grounding, then abstract). Edges exist iff the raw overlap is > 0.
struct CandidateGraph {
    std::vector<GraphNode> nodes;
    std::vector<GraphEdge> edges;
    ThetaParams theta;
    AblationFlags ablation;

    std::size_t node_count() const { return nodes.size(); }
    bool is_abstract(int v) const { return nodes[v].kind == NodeKind::Abstract; }
    bool is_grounding(int v) const { return nodes[v].kind == NodeKind::Grounding; }
};

double node_weight(NodeKind kind, double relevance, const ThetaParams& theta);
double edge_weight(NodeKind ku, NodeKind kv, double raw_overlap,
                   const ThetaParams& theta);

CandidateGraph build_candidate_graph(const Question& question, int choice_index,
                                     const std::vector<RetrievedFact>& grounding,
                                     const std::vector<RetrievedFact>& abstract_facts,
                                     const ThetaParams& theta, const TermConfig& cfg,
                                     const AblationFlags& ablation = {});

/// Recompute all node/edge weights under a new theta. Raw overlaps and
/// relevances are kept, so the optimizer's inner loop avoids re-tokenizing.
void reweight(CandidateGraph& graph, const ThetaParams& theta);

}  // namespace lpqa

#pragma once

#include <limits>
#include <string>
#include <vector>

#include "lpqa/bm25.hpp"
#include "lpqa/graph.hpp"
#include "lpqa/solver.hpp"

namespace lpqa {

struct PipelineConfig {
    int l = 5;              // top grounding facts per candidate
    int m = 5;              // top abstract facts per candidate
    int abstract_limit = 2; // K
    Scorer scorer = Scorer::BM25;
    AblationFlags ablation;
    int jobs = 1;
};

struct Prediction {
    std::string question_id;
    int chosen_index = 0;
    std::vector<double> per_choice_omega;  // -inf marks an infeasible candidate
    std::vector<std::string> explanation;  // abstract fact ids, sorted
    std::vector<SubgraphSolution> subgraphs;
    std::vector<CandidateGraph> graphs;  // populated only when keep_graphs
};

constexpr double kInfeasibleOmega = -std::numeric_limits<double>::infinity();

/// End-to-end answering over fixed knowledge bases and retrieval indexes.
class Pipeline {
public:
    Pipeline(KnowledgeBase grounding_kb, KnowledgeBase abstract_kb,
             TermConfig term_cfg, PipelineConfig cfg,
             UnificationModel unification = {});

    Prediction answer(const Question& question, const ThetaParams& theta,
                      bool keep_graphs = false) const;
    std::vector<Prediction> answer_all(const std::vector<Question>& questions,
                                       const ThetaParams& theta) const;

    /// Retrieval does not depend on theta; cache the per-choice graphs once
    /// and reweight them inside the optimizer's inner loop.
    struct CachedQuestion {
        Question question;
        std::vector<CandidateGraph> graphs;
    };
    std::vector<CachedQuestion> precompute(const std::vector<Question>& questions) const;
    double evaluate_theta(const ThetaParams& theta,
                          std::vector<CachedQuestion>& cached) const;

    const PipelineConfig& config() const { return cfg_; }
    const KnowledgeBase& grounding_kb() const { return grounding_kb_; }
    const KnowledgeBase& abstract_kb() const { return abstract_kb_; }
    const TermConfig& term_config() const { return term_cfg_; }

private:
    CandidateGraph build_graph(const Question& q, int choice,
                               const ThetaParams& theta) const;
    static Prediction pick(const Question& q, std::vector<CandidateGraph> graphs,
                           int abstract_limit, const AblationFlags& ablation,
                           bool keep_graphs);

    KnowledgeBase grounding_kb_;
    KnowledgeBase abstract_kb_;
    TermConfig term_cfg_;
    PipelineConfig cfg_;
    Bm25Index grounding_index_;
    Bm25Index abstract_index_;
    UnificationModel unification_;
};

double accuracy(const std::vector<Prediction>& predictions,
                const std::vector<Question>& questions);

struct F1Score {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Set precision/recall/F1 over abstract-fact ids. Empty vs empty scores 1;
/// empty prediction against a nonempty gold scores 0.
F1Score f1_score(const std::vector<std::string>& predicted, const TermSet& gold);

struct ExplanationScores {
    double macro_f1 = 0.0;
    double micro_f1 = 0.0;
};
ExplanationScores explanation_f1(const std::vector<Prediction>& predictions,
                                 const std::vector<Question>& questions);

enum class BucketBy { ExplanationLength, ChoiceTermOverlap, UniqueTermCount };

struct BucketRow {
    double lo = 0.0;
    double hi = 0.0;
    int n = 0;
    double accuracy = 0.0;
};

/// Accuracy partitioned by a per-question feature. `edges` are the interior
/// bucket boundaries; bucket i covers [edges[i-1], edges[i]).
std::vector<BucketRow> bucketed_report(const std::vector<Prediction>& predictions,
                                       const std::vector<Question>& questions,
                                       BucketBy bucket_by,
                                       const std::vector<double>& edges,
                                       const TermConfig& term_cfg);

}  // namespace lpqa

#include "lpqa/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace lpqa {

Pipeline::Pipeline(KnowledgeBase grounding_kb, KnowledgeBase abstract_kb,
                   TermConfig term_cfg, PipelineConfig cfg,
                   UnificationModel unification)
    : grounding_kb_(std::move(grounding_kb)),
      abstract_kb_(std::move(abstract_kb)),
      term_cfg_(std::move(term_cfg)),
      cfg_(cfg),
      unification_(std::move(unification)) {
    if (!grounding_kb_.facts().empty())
        grounding_index_ = Bm25Index(grounding_kb_.facts());
    if (!abstract_kb_.facts().empty())
        abstract_index_ = Bm25Index(abstract_kb_.facts());
}

CandidateGraph Pipeline::build_graph(const Question& q, int choice,
                                     const ThetaParams& theta) const {
    const auto retrieved =
        retrieve(q, choice, grounding_kb_, grounding_index_, abstract_kb_,
                 abstract_index_, cfg_.l, cfg_.m, term_cfg_, cfg_.scorer,
                 &unification_);
    return build_candidate_graph(q, choice, retrieved.grounding, retrieved.abstract_,
                                 theta, term_cfg_, cfg_.ablation);
}

Prediction Pipeline::pick(const Question& q, std::vector<CandidateGraph> graphs,
                          int abstract_limit, const AblationFlags& ablation,
                          bool keep_graphs) {
    Prediction pred;
    pred.question_id = q.id;
    for (auto& g : graphs) {
        const IlpModel model = emit_constraints(g, abstract_limit, ablation);
        SubgraphSolution sol = solve(model);
        pred.per_choice_omega.push_back(
            sol.status == SubgraphSolution::Status::Optimal ? sol.objective
                                                            : kInfeasibleOmega);
        pred.subgraphs.push_back(std::move(sol));
    }
    // argmax; first index wins on exact ties, and index 0 when every
    // candidate is infeasible.
    pred.chosen_index = 0;
    for (std::size_t i = 1; i < pred.per_choice_omega.size(); ++i) {
        if (pred.per_choice_omega[i] > pred.per_choice_omega[pred.chosen_index])
            pred.chosen_index = static_cast<int>(i);
    }
    const auto& winner = pred.subgraphs[pred.chosen_index];
    const auto& graph = graphs[pred.chosen_index];
    if (winner.status == SubgraphSolution::Status::Optimal) {
        for (int v : winner.selected_vertices) {
            if (graph.nodes[v].kind == NodeKind::Abstract)
                pred.explanation.push_back(graph.nodes[v].fact_id);
        }
        std::sort(pred.explanation.begin(), pred.explanation.end());
    }
    if (keep_graphs) pred.graphs = std::move(graphs);
    return pred;
}

Prediction Pipeline::answer(const Question& question, const ThetaParams& theta,
                            bool keep_graphs) const {
    if (question.choices.size() < 2)
        throw DataError("question " + question.id + " has fewer than 2 choices");
    const ThetaParams effective =
        cfg_.ablation.no_tuning ? ThetaParams::untuned() : theta;
    std::vector<CandidateGraph> graphs;
    for (std::size_t c = 0; c < question.choices.size(); ++c)
        graphs.push_back(build_graph(question, static_cast<int>(c), effective));
    return pick(question, std::move(graphs), cfg_.abstract_limit, cfg_.ablation,
                keep_graphs);
}

namespace {

/// Deterministic parallel map: results land at their input index.
template <typename Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    const int n_workers = std::min<std::size_t>(jobs, count);
    for (int w = 0; w < n_workers; ++w) {
        workers.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1))
                fn(i);
        });
    }
    for (auto& t : workers) t.join();
}

}  // namespace

std::vector<Prediction> Pipeline::answer_all(const std::vector<Question>& questions,
                                             const ThetaParams& theta) const {
    std::vector<Prediction> out(questions.size());
    parallel_for(questions.size(), cfg_.jobs,
                 [&](std::size_t i) { out[i] = answer(questions[i], theta); });
    return out;
}

std::vector<Pipeline::CachedQuestion> Pipeline::precompute(
    const std::vector<Question>& questions) const {
    std::vector<CachedQuestion> cached(questions.size());
    parallel_for(questions.size(), cfg_.jobs, [&](std::size_t i) {
        cached[i].question = questions[i];
        for (std::size_t c = 0; c < questions[i].choices.size(); ++c) {
            cached[i].graphs.push_back(build_graph(
                questions[i], static_cast<int>(c), ThetaParams::untuned()));
        }
    });
    return cached;
}

double Pipeline::evaluate_theta(const ThetaParams& theta,
                                std::vector<CachedQuestion>& cached) const {
    if (cached.empty()) throw ConfigError("evaluate_theta on an empty training set");
    std::vector<int> correct(cached.size(), 0);
    parallel_for(cached.size(), cfg_.jobs, [&](std::size_t i) {
        auto& cq = cached[i];
        std::vector<CandidateGraph> graphs = cq.graphs;
        for (auto& g : graphs) reweight(g, theta);
        const Prediction pred =
            pick(cq.question, std::move(graphs), cfg_.abstract_limit, cfg_.ablation,
                 false);
        if (cq.question.gold_answer && pred.chosen_index == *cq.question.gold_answer)
            correct[i] = 1;
    });
    int total = 0;
    for (int c : correct) total += c;
    return static_cast<double>(total) / static_cast<double>(cached.size());
}

double accuracy(const std::vector<Prediction>& predictions,
                const std::vector<Question>& questions) {
    if (predictions.size() != questions.size())
        throw DataError("prediction/question count mismatch");
    if (predictions.empty()) throw DataError("accuracy of an empty set");
    int correct = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (!questions[i].gold_answer)
            throw DataError("question " + questions[i].id + " has no gold answer");
        if (predictions[i].chosen_index == *questions[i].gold_answer) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(predictions.size());
}

F1Score f1_score(const std::vector<std::string>& predicted, const TermSet& gold) {
    if (predicted.empty() && gold.empty()) return {1.0, 1.0, 1.0};
    if (predicted.empty() || gold.empty()) return {0.0, 0.0, 0.0};
    std::size_t hits = 0;
    for (const auto& id : predicted) hits += gold.count(id);
    const double p = static_cast<double>(hits) / static_cast<double>(predicted.size());
    const double r = static_cast<double>(hits) / static_cast<double>(gold.size());
    const double f1 = (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
    return {p, r, f1};
}

ExplanationScores explanation_f1(const std::vector<Prediction>& predictions,
                                 const std::vector<Question>& questions) {
    if (predictions.size() != questions.size())
        throw DataError("prediction/question count mismatch");
    double macro_sum = 0.0;
    std::size_t n = 0;
    std::size_t hits = 0, pred_total = 0, gold_total = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (!questions[i].gold_explanation) continue;
        const auto& gold = *questions[i].gold_explanation;
        macro_sum += f1_score(predictions[i].explanation, gold).f1;
        ++n;
        pred_total += predictions[i].explanation.size();
        gold_total += gold.size();
        for (const auto& id : predictions[i].explanation) hits += gold.count(id);
    }
    if (n == 0) throw DataError("no gold explanations present");
    ExplanationScores scores;
    scores.macro_f1 = macro_sum / static_cast<double>(n);
    const double p = pred_total ? static_cast<double>(hits) / pred_total : 1.0;
    const double r = gold_total ? static_cast<double>(hits) / gold_total : 1.0;
    scores.micro_f1 = (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
    return scores;
}

namespace {

double bucket_feature(const Question& q, BucketBy by, const TermConfig& cfg) {
    switch (by) {
        case BucketBy::ExplanationLength:
            if (!q.gold_explanation)
                throw DataError("question " + q.id + " has no gold explanation");
            return static_cast<double>(q.gold_explanation->size());
        case BucketBy::ChoiceTermOverlap: {
            double best = 0.0;
            std::vector<TermSet> sets;
            for (const auto& c : q.choices) sets.push_back(extract_unique_terms(c, cfg));
            for (std::size_t i = 0; i < sets.size(); ++i)
                for (std::size_t j = i + 1; j < sets.size(); ++j)
                    best = std::max(best, compute_overlap(sets[i], sets[j]));
            return best;
        }
        case BucketBy::UniqueTermCount: {
            std::string text = q.stem;
            if (q.gold_answer) text += " " + q.choices.at(*q.gold_answer);
            return static_cast<double>(extract_unique_terms(text, cfg).size());
        }
    }
    return 0.0;
}

}  // namespace

std::vector<BucketRow> bucketed_report(const std::vector<Prediction>& predictions,
                                       const std::vector<Question>& questions,
                                       BucketBy bucket_by,
                                       const std::vector<double>& edges,
                                       const TermConfig& term_cfg) {
    if (predictions.size() != questions.size())
        throw DataError("prediction/question count mismatch");
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> bounds;
    bounds.push_back(-inf);
    for (double e : edges) bounds.push_back(e);
    bounds.push_back(inf);

    std::vector<BucketRow> rows(bounds.size() - 1);
    std::vector<int> correct(rows.size(), 0);
    for (std::size_t b = 0; b < rows.size(); ++b) {
        rows[b].lo = bounds[b];
        rows[b].hi = bounds[b + 1];
    }
    for (std::size_t i = 0; i < questions.size(); ++i) {
        const double x = bucket_feature(questions[i], bucket_by, term_cfg);
        std::size_t b = 0;
        while (b + 1 < rows.size() && x >= bounds[b + 1]) ++b;
        ++rows[b].n;
        if (questions[i].gold_answer &&
            predictions[i].chosen_index == *questions[i].gold_answer)
            ++correct[b];
    }
    for (std::size_t b = 0; b < rows.size(); ++b) {
        rows[b].accuracy = rows[b].n ? static_cast<double>(correct[b]) / rows[b].n : 0.0;
    }
    return rows;
}

}  // namespace lpqa

#include "lpqa/bm25.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace lpqa {

double bm25_term_score(double idf, double tf, double k1, double b, double len,
                       double avg_len) {
    return idf * (tf * (k1 + 1.0)) / (tf + k1 * (1.0 - b + b * len / avg_len));
}

Bm25Index::Bm25Index(const std::vector<Fact>& facts, double k1, double b)
    : k1_(k1), b_(b) {
    if (facts.empty()) throw DataError("cannot build BM25 index over an empty corpus");
    double total = 0.0;
    for (const auto& f : facts) {
        if (doc_lengths_.count(f.id)) throw DataError("duplicate fact id: " + f.id);
        doc_lengths_[f.id] = f.terms.size();
        doc_terms_[f.id] = f.terms;
        total += static_cast<double>(f.terms.size());
        for (const auto& t : f.terms) postings_[t].push_back(f.id);
    }
    for (auto& [term, ids] : postings_) std::sort(ids.begin(), ids.end());
    avg_doc_length_ = total / static_cast<double>(facts.size());
}

double Bm25Index::idf(const std::string& term) const {
    auto it = postings_.find(term);
    const double df = it == postings_.end() ? 0.0 : static_cast<double>(it->second.size());
    const double n = static_cast<double>(doc_count());
    return std::log((n - df + 0.5) / (df + 0.5) + 1.0);
}

double Bm25Index::score(const TermSet& query, const std::string& fact_id) const {
    auto it = doc_terms_.find(fact_id);
    if (it == doc_terms_.end()) throw DataError("unknown fact id: " + fact_id);
    const auto& terms = it->second;
    const double len = static_cast<double>(doc_lengths_.at(fact_id));
    double score = 0.0;
    for (const auto& t : query) {
        if (!terms.count(t)) continue;
        // tf is 1 under set semantics.
        score += bm25_term_score(idf(t), 1.0, k1_, b_, len, avg_doc_length_);
    }
    return score;
}

std::vector<std::pair<std::string, double>> Bm25Index::rank(const TermSet& query) const {
    std::vector<std::pair<std::string, double>> out;
    out.reserve(doc_lengths_.size());
    for (const auto& [id, len] : doc_lengths_) out.emplace_back(id, score(query, id));
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return out;
}

UnificationModel::UnificationModel(const std::vector<Question>& train_questions,
                                   double lambda_mix, int top_j, double k1, double b)
    : train_(train_questions), lambda_mix_(lambda_mix), top_j_(top_j) {
    if (train_.empty()) return;
    std::vector<Fact> stems;
    stems.reserve(train_.size());
    TermConfig identity;  // stems are indexed raw; callers pass extracted query terms
    for (const auto& q : train_) {
        Fact f;
        f.id = q.id;
        f.text = q.stem;
        f.terms = extract_unique_terms(q.stem, identity);
        stems.push_back(std::move(f));
    }
    stem_index_ = Bm25Index(stems, k1, b);
}

double UnificationModel::score(const Bm25Index& abstract_index, const TermSet& query,
                               const std::string& fact_id) const {
    const double bm25 = abstract_index.score(query, fact_id);
    if (train_.empty()) return bm25;

    auto ranked = stem_index_.rank(query);
    if (ranked.size() > static_cast<std::size_t>(top_j_)) ranked.resize(top_j_);

    double sim_sum = 0.0;
    double hit_sum = 0.0;
    for (const auto& [qid, sim] : ranked) {
        sim_sum += sim;
        for (const auto& q : train_) {
            if (q.id != qid) continue;
            if (q.gold_explanation && q.gold_explanation->count(fact_id)) hit_sum += sim;
            break;
        }
    }
    const double unification = sim_sum > 0.0 ? hit_sum / sim_sum : 0.0;
    return lambda_mix_ * bm25 + (1.0 - lambda_mix_) * unification;
}

namespace {

std::vector<RetrievedFact> top_k(const KnowledgeBase& kb,
                                 const std::vector<std::pair<std::string, double>>& ranked,
                                 int k) {
    std::vector<RetrievedFact> out;
    double max_raw = 0.0;
    for (int i = 0; i < k && i < static_cast<int>(ranked.size()); ++i) {
        const Fact* f = kb.find(ranked[i].first);
        out.push_back({*f, ranked[i].second});
        max_raw = std::max(max_raw, ranked[i].second);
    }
    if (max_raw > 0.0) {
        for (auto& rf : out) rf.relevance /= max_raw;
    }
    return out;
}

}  // namespace

RetrievalResult retrieve(const Question& question, int choice_index,
                         const KnowledgeBase& grounding_kb,
                         const Bm25Index& grounding_index,
                         const KnowledgeBase& abstract_kb,
                         const Bm25Index& abstract_index, int l, int m,
                         const TermConfig& cfg, Scorer scorer,
                         const UnificationModel* unification) {
    const TermSet query = extract_unique_terms(
        question.stem + " " + question.choices.at(choice_index), cfg);

    RetrievalResult result;
    if (l > 0) result.grounding = top_k(grounding_kb, grounding_index.rank(query), l);

    if (m > 0) {
        std::vector<std::pair<std::string, double>> ranked;
        if (scorer == Scorer::Unification && unification != nullptr &&
            !unification->empty()) {
            for (const auto& f : abstract_kb.facts()) {
                ranked.emplace_back(f.id, unification->score(abstract_index, query, f.id));
            }
            std::stable_sort(ranked.begin(), ranked.end(),
                             [](const auto& a, const auto& b) {
                                 if (a.second != b.second) return a.second > b.second;
                                 return a.first < b.first;
                             });
        } else {
            if (scorer == Scorer::Unification) {
                std::cerr << "warning: empty unification training set, "
                             "falling back to BM25\n";
            }
            ranked = abstract_index.rank(query);
        }
        result.abstract_ = top_k(abstract_kb, ranked, m);
    }
    return result;
}

}  // namespace lpqa

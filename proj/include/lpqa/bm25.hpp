#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lpqa/kb.hpp"

namespace lpqa {

/// Okapi per-term score: idf * tf*(k1+1) / (tf + k1*(1 - b + b*len/avg_len)).
double bm25_term_score(double idf, double tf, double k1, double b, double len,
                       double avg_len);

/// Okapi BM25 inverted index over the term sets of one knowledge base.
/// Term frequency within a fact is always 1 since facts store term sets.
class Bm25Index {
public:
    Bm25Index() = default;
    Bm25Index(const std::vector<Fact>& facts, double k1 = 1.2, double b = 0.75);

    double score(const TermSet& query, const std::string& fact_id) const;

    /// All facts scored against the query, sorted by (score desc, id asc).
    std::vector<std::pair<std::string, double>> rank(const TermSet& query) const;

    double k1() const { return k1_; }
    double b() const { return b_; }
    double avg_doc_length() const { return avg_doc_length_; }
    std::size_t doc_count() const { return doc_lengths_.size(); }
    const std::map<std::string, std::vector<std::string>>& postings() const {
        return postings_;
    }
    const std::map<std::string, std::size_t>& doc_lengths() const {
        return doc_lengths_;
    }

private:
    double idf(const std::string& term) const;

    std::map<std::string, std::vector<std::string>> postings_;  // term -> fact ids
    std::map<std::string, std::size_t> doc_lengths_;
    std::map<std::string, TermSet> doc_terms_;
    double avg_doc_length_ = 0.0;
    double k1_ = 1.2;
    double b_ = 0.75;
};

struct RetrievedFact {
    Fact fact;
    double relevance = 0.0;  // per-list max-normalized, in [0,1]
};

enum class Scorer { BM25, Unification };

/// Abstract-fact scorer mixing BM25 with an explanatory-reuse term: how
/// often the fact appears in gold explanations of similar training questions.
class UnificationModel {
public:
    UnificationModel() = default;
    UnificationModel(const std::vector<Question>& train_questions,
                     double lambda_mix = 0.5, int top_j = 10, double k1 = 1.2,
                     double b = 0.75);

    bool empty() const { return train_.empty(); }

    double score(const Bm25Index& abstract_index, const TermSet& query,
                 const std::string& fact_id) const;

private:
    std::vector<Question> train_;
    Bm25Index stem_index_;  // over training-question stems
    double lambda_mix_ = 0.5;
    int top_j_ = 10;
};

struct RetrievalResult {
    std::vector<RetrievedFact> grounding;
    std::vector<RetrievedFact> abstract_;
};

/// Top-l grounding facts by BM25 and top-m abstract facts by the chosen
/// scorer for the query Q||c_i. Relevance is normalized by the maximum raw
/// score within each returned list; ties break by ascending fact id.
RetrievalResult retrieve(const Question& question, int choice_index,
                         const KnowledgeBase& grounding_kb,
                         const Bm25Index& grounding_index,
                         const KnowledgeBase& abstract_kb,
                         const Bm25Index& abstract_index, int l, int m,
                         const TermConfig& cfg, Scorer scorer = Scorer::BM25,
                         const UnificationModel* unification = nullptr);

}  // namespace lpqa

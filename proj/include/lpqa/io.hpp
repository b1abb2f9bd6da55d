#pragma once

#include <string>
#include <vector>

#include "lpqa/bayesopt.hpp"
#include "lpqa/kb.hpp"
#include "lpqa/pipeline.hpp"

namespace lpqa {

/// KB files are UTF-8 TSV (id <TAB> text) or JSONL ({"id","text"}), chosen
/// by extension (.jsonl/.json -> JSONL, anything else TSV). The fact kind
/// is per-file. Terms are extracted at load time.
std::vector<Fact> load_kb(const std::string& path, FactKind kind,
                          const TermConfig& cfg);

/// JSONL: {"id","stem","choices":[...],"answer_index"?,"gold_explanation"?:[...]}.
std::vector<Question> load_questions(const std::string& path);

/// JSON with inline stopwords[]/lemmas{}/lexicon[] or *_path references to
/// newline-separated files (lemmas_path: TSV surface <TAB> lemma).
TermConfig load_term_config(const std::string& path);

ThetaParams load_theta(const std::string& path);
void save_theta(const ThetaParams& theta, const std::string& path);

/// Versioned index artifact: the term-extracted corpus, from which the
/// BM25 index rebuilds deterministically.
void save_index(const std::vector<Fact>& facts, FactKind kind, double k1, double b,
                const std::string& path);
struct LoadedIndex {
    std::vector<Fact> facts;
    FactKind kind = FactKind::Grounding;
    double k1 = 1.2;
    double b = 0.75;
};
LoadedIndex load_index(const std::string& path);

void save_predictions(const std::vector<Prediction>& predictions,
                      const std::string& path, bool dump_graphs = false);

void save_trace(const BoTrace& trace, const std::string& path);

void save_bucket_csv(const std::vector<BucketRow>& rows, const std::string& path);

std::string graph_to_json(const CandidateGraph& graph);

}  // namespace lpqa

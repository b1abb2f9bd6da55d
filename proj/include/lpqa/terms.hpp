#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>

namespace lpqa {

using TermSet = std::set<std::string>;

/// Normalization tables applied when extracting unique terms from text.
/// An empty lemma table means identity lemmatization; an absent lexicon
/// disables the content-word filter.
struct TermConfig {
    std::set<std::string> stopwords;
    std::map<std::string, std::string> lemmas;
    std::optional<std::set<std::string>> lexicon;
    bool lowercase = true;
};

/// Tokenize on non-alphanumeric boundaries, lowercase (if configured),
/// lemmatize, drop stopwords, and apply the lexicon filter. Duplicates
/// collapse into the returned set.
TermSet extract_unique_terms(const std::string& text, const TermConfig& cfg);

/// Lexical overlap |a ∩ b| / max(|a|, |b|). Both-empty input scores 0.
double compute_overlap(const TermSet& a, const TermSet& b);

}  // namespace lpqa

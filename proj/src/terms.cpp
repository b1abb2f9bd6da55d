#include "lpqa/terms.hpp"

#include <algorithm>
#include <cctype>

namespace lpqa {

TermSet extract_unique_terms(const std::string& text, const TermConfig& cfg) {
    TermSet out;
    std::string token;
    auto flush = [&] {
        if (token.empty()) return;
        std::string t = std::move(token);
        token.clear();
        if (cfg.lowercase) {
            std::transform(t.begin(), t.end(), t.begin(),
                           [](unsigned char c) { return std::tolower(c); });
        }
        if (auto it = cfg.lemmas.find(t); it != cfg.lemmas.end()) t = it->second;
        if (cfg.stopwords.count(t)) return;
        if (cfg.lexicon && !cfg.lexicon->count(t)) return;
        out.insert(std::move(t));
    };
    for (unsigned char c : text) {
        if (std::isalnum(c)) {
            token.push_back(static_cast<char>(c));
        } else {
            flush();
        }
    }
    flush();
    return out;
}

double compute_overlap(const TermSet& a, const TermSet& b) {
    if (a.empty() && b.empty()) return 0.0;
    std::size_t inter = 0;
    const TermSet& small = a.size() <= b.size() ? a : b;
    const TermSet& big = a.size() <= b.size() ? b : a;
    for (const auto& t : small) inter += big.count(t);
    return static_cast<double>(inter) /
           static_cast<double>(std::max(a.size(), b.size()));
}

}  // namespace lpqa

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "lpqa/terms.hpp"

namespace lpqa {

/// Usage or configuration problem; the CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data; the CLI maps this to exit code 3.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class FactKind { Grounding, Abstract };

struct Fact {
    std::string id;
    std::string text;
    FactKind kind = FactKind::Grounding;
    TermSet terms;
};

struct Question {
    std::string id;
    std::string stem;
    std::vector<std::string> choices;
    std::optional<int> gold_answer;
    std::optional<TermSet> gold_explanation;  // abstract fact ids
};

/// One knowledge base: facts of a single kind with unique ids.
class KnowledgeBase {
public:
    KnowledgeBase() = default;
    KnowledgeBase(std::vector<Fact> facts);

    const std::vector<Fact>& facts() const { return facts_; }
    const Fact* find(const std::string& id) const;
    std::size_t size() const { return facts_.size(); }

private:
    std::vector<Fact> facts_;
    std::unordered_map<std::string, std::size_t> by_id_;
};

}  // namespace lpqa

#include "lpqa/kb.hpp"

namespace lpqa {

KnowledgeBase::KnowledgeBase(std::vector<Fact> facts) : facts_(std::move(facts)) {
    for (std::size_t i = 0; i < facts_.size(); ++i) {
        auto [it, inserted] = by_id_.emplace(facts_[i].id, i);
        if (!inserted) {
            throw DataError("duplicate fact id: " + facts_[i].id);
        }
    }
}

const Fact* KnowledgeBase::find(const std::string& id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &facts_[it->second];
}

}  // namespace lpqa

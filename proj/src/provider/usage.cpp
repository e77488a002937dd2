#include "jot/provider/usage.hpp"

#include "jot/provider/errors.hpp"

namespace jot::provider {

void UsageLedger::record(CallRecord record) {
    std::lock_guard lock(mutex_);
    totals_.calls += 1;
    totals_.attempts += record.attempts;
    totals_.prompt_tokens += record.prompt_tokens;
    totals_.completion_tokens += record.completion_tokens;
    entries_.push_back(std::move(record));
}

std::vector<CallRecord> UsageLedger::entries() const {
    std::lock_guard lock(mutex_);
    return entries_;
}

UsageLedger::Totals UsageLedger::totals() const {
    std::lock_guard lock(mutex_);
    return totals_;
}

std::int64_t UsageLedger::calls_for_role(const std::string& role) const {
    std::lock_guard lock(mutex_);
    std::int64_t count = 0;
    for (const auto& entry : entries_) {
        if (entry.tag.role == role) ++count;
    }
    return count;
}

void TokenBudget::charge(std::int64_t tokens) {
    std::lock_guard lock(mutex_);
    used_ += tokens;
    if (ceiling_ && used_ > *ceiling_) {
        throw BudgetExceeded("token budget exceeded: " + std::to_string(used_) + " > " +
                             std::to_string(*ceiling_));
    }
}

std::int64_t TokenBudget::used() const {
    std::lock_guard lock(mutex_);
    return used_;
}

std::int64_t estimate_tokens(std::string_view text) {
    return static_cast<std::int64_t>((text.size() + 3) / 4);
}

std::int64_t estimate_prompt_tokens(const ChatRequest& request) {
    std::int64_t total = 0;
    for (const auto& turn : request.turns) total += estimate_tokens(turn.content);
    return total;
}

} // namespace jot::provider

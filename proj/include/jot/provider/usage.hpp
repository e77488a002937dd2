#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "jot/provider/types.hpp"

namespace jot::provider {

struct CallRecord {
    std::string model;
    CallTag tag;
    std::string request_fingerprint;
    int attempts = 1;
    std::int64_t prompt_tokens = 0;
    std::int64_t completion_tokens = 0;
    double latency_ms = 0.0;
};

/// Thread-safe append-only record of every completed provider call.
/// Totals are maintained incrementally and always equal the sum over entries.
class UsageLedger {
public:
    struct Totals {
        std::int64_t calls = 0;
        std::int64_t attempts = 0;
        std::int64_t prompt_tokens = 0;
        std::int64_t completion_tokens = 0;
    };

    void record(CallRecord record);
    std::vector<CallRecord> entries() const;
    Totals totals() const;
    std::int64_t calls_for_role(const std::string& role) const;

private:
    mutable std::mutex mutex_;
    std::vector<CallRecord> entries_;
    Totals totals_;
};

/// Shared per-experiment token ceiling. charge() throws BudgetExceeded once
/// the running total would pass the ceiling; an absent ceiling never throws.
class TokenBudget {
public:
    TokenBudget() = default;
    explicit TokenBudget(std::optional<std::int64_t> ceiling) : ceiling_(ceiling) {}

    void charge(std::int64_t tokens);
    std::int64_t used() const;
    std::optional<std::int64_t> ceiling() const { return ceiling_; }

private:
    mutable std::mutex mutex_;
    std::optional<std::int64_t> ceiling_;
    std::int64_t used_ = 0;
};

/// Rough token count for backends that do not report usage (~4 chars/token).
std::int64_t estimate_tokens(std::string_view text);
std::int64_t estimate_prompt_tokens(const ChatRequest& request);

} // namespace jot::provider

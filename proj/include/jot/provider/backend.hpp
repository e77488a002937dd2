#pragma once

#include <memory>
#include <string>

#include "jot/provider/types.hpp"
#include "jot/provider/usage.hpp"

namespace jot::provider {

/// Uniform chat-completion surface. Implementations validate the request,
/// produce the assistant text, and account the call in the shared ledger.
/// All implementations are safe for concurrent calls unless noted.
class Backend {
public:
    virtual ~Backend() = default;

    virtual std::string complete(const ChatRequest& request) = 0;

    const std::shared_ptr<UsageLedger>& ledger() const { return ledger_; }
    const std::shared_ptr<TokenBudget>& budget() const { return budget_; }

protected:
    explicit Backend(std::shared_ptr<UsageLedger> ledger = nullptr,
                     std::shared_ptr<TokenBudget> budget = nullptr)
        : ledger_(ledger ? std::move(ledger) : std::make_shared<UsageLedger>()),
          budget_(budget ? std::move(budget) : std::make_shared<TokenBudget>()) {}

    std::shared_ptr<UsageLedger> ledger_;
    std::shared_ptr<TokenBudget> budget_;
};

/// The per-tier backend pair a protocol runs against. JoT puts the judge on
/// `high` and the advocates on `low`; Khan-debate inverts the assignment.
struct TierBackends {
    std::shared_ptr<Backend> high;
    std::shared_ptr<Backend> low;
};

} // namespace jot::provider

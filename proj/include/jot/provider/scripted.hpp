#pragma once

#include <atomic>
#include <deque>
#include <filesystem>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "jot/provider/backend.hpp"

namespace jot::provider {

/// Deterministic backend whose completions come from a pre-written script.
///
/// Keyed mode routes by the request's (role, round) tag, with a FIFO queue
/// per key, and is safe under concurrency. Flat mode is one global FIFO and
/// enforces single-threaded use by failing on an overlapping call.
class ScriptedBackend final : public Backend {
public:
    using KeyedScript = std::map<std::string, std::vector<std::string>>;

    static std::shared_ptr<ScriptedBackend> keyed(KeyedScript script,
                                                  std::shared_ptr<UsageLedger> ledger = nullptr,
                                                  std::shared_ptr<TokenBudget> budget = nullptr);

    /// Pair-list form; throws std::invalid_argument on a duplicate key.
    static std::shared_ptr<ScriptedBackend>
    keyed(const std::vector<std::pair<std::string, std::string>>& entries,
          std::shared_ptr<UsageLedger> ledger = nullptr,
          std::shared_ptr<TokenBudget> budget = nullptr);

    static std::shared_ptr<ScriptedBackend> flat(std::vector<std::string> responses,
                                                 std::shared_ptr<UsageLedger> ledger = nullptr,
                                                 std::shared_ptr<TokenBudget> budget = nullptr);

    /// Script file: {"keyed": {"role:round": "text" | ["text", ...]}} or
    /// {"flat": ["text", ...]}.
    static std::shared_ptr<ScriptedBackend> from_file(const std::filesystem::path& path,
                                                      std::shared_ptr<UsageLedger> ledger = nullptr,
                                                      std::shared_ptr<TokenBudget> budget = nullptr);

    std::string complete(const ChatRequest& request) override;

    /// Every request seen, in completion order. For test inspection.
    std::vector<ChatRequest> requests() const;

private:
    struct KeyedTag {};
    struct FlatTag {};
    ScriptedBackend(KeyedTag, KeyedScript script, std::shared_ptr<UsageLedger> ledger,
                    std::shared_ptr<TokenBudget> budget);
    ScriptedBackend(FlatTag, std::vector<std::string> responses,
                    std::shared_ptr<UsageLedger> ledger, std::shared_ptr<TokenBudget> budget);

    std::string next_response(const ChatRequest& request);

    bool keyed_mode_ = false;
    mutable std::mutex mutex_;
    std::map<std::string, std::deque<std::string>> keyed_;
    std::deque<std::string> flat_;
    std::atomic<bool> in_flat_call_{false};
    std::vector<ChatRequest> seen_;
};

} // namespace jot::provider

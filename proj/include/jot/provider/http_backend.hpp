#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <ostream>
#include <random>
#include <string>

#include "jot/provider/backend.hpp"
#include "jot/provider/rate_limiter.hpp"

namespace jot::provider {

/// Up to 5 attempts; 1s·2^k backoff with ±20% jitter; only transport
/// failures and 429/5xx are retried.
struct RetryPolicy {
    int max_attempts = 5;
    std::chrono::milliseconds base_delay{1000};
    double jitter = 0.2;
};

struct HttpBackendConfig {
    ProviderKind kind = ProviderKind::OpenAiCompatible;
    std::string base_url;  // empty = provider's public endpoint
    std::string api_key;   // empty = resolve from environment
    RetryPolicy retry;
    std::chrono::seconds read_timeout{120};
    bool trace = false;
    std::ostream* trace_sink = nullptr;  // defaults to std::clog when trace is on
    std::shared_ptr<RateLimiter> limiter;
    std::uint64_t jitter_seed = 0;  // 0 = nondeterministic
};

/// Chat-completion client for OpenAI-style (`POST /v1/chat/completions`) and
/// Anthropic-style (`POST /v1/messages`) endpoints. The base URL may point at
/// any compatible local inference server.
class HttpBackend final : public Backend {
public:
    explicit HttpBackend(HttpBackendConfig config, std::shared_ptr<UsageLedger> ledger = nullptr,
                         std::shared_ptr<TokenBudget> budget = nullptr);

    std::string complete(const ChatRequest& request) override;

    const std::string& base_url() const { return base_url_; }
    std::string endpoint_path() const;

    /// Environment variable consulted for credentials, by provider kind.
    static std::string credential_env_var(ProviderKind kind);

private:
    std::string resolved_api_key() const;
    std::chrono::milliseconds backoff_delay(int retry_index);

    HttpBackendConfig config_;
    std::string base_url_;
    std::string path_prefix_;
    std::mutex rng_mutex_;
    std::mt19937_64 rng_;
};

} // namespace jot::provider

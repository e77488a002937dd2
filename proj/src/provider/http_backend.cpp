#include "jot/provider/http_backend.hpp"

#include <cstdlib>
#include <iostream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "jot/provider/errors.hpp"

namespace jot::provider {
namespace {

using nlohmann::json;

constexpr const char* kOpenAiDefaultBase = "https://api.openai.com";
constexpr const char* kAnthropicDefaultBase = "https://api.anthropic.com";
constexpr const char* kAnthropicVersion = "2023-06-01";
constexpr int kAnthropicDefaultMaxTokens = 4096;

std::string default_base_url(ProviderKind kind) {
    return kind == ProviderKind::AnthropicCompatible ? kAnthropicDefaultBase : kOpenAiDefaultBase;
}

std::string env_or_empty(const char* name) {
    const char* value = std::getenv(name);
    return value ? std::string(value) : std::string();
}

// Splits "scheme://host[:port]/prefix" into the client target and the path
// prefix httplib cannot take in its constructor.
std::pair<std::string, std::string> split_base_url(const std::string& base_url) {
    const auto scheme_end = base_url.find("://");
    if (scheme_end == std::string::npos) {
        throw std::invalid_argument("base URL must include a scheme: " + base_url);
    }
    const auto path_start = base_url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {base_url, ""};
    std::string prefix = base_url.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    return {base_url.substr(0, path_start), prefix};
}

json openai_body(const ChatRequest& request) {
    json messages = json::array();
    for (const auto& turn : request.turns) {
        messages.push_back({{"role", to_string(turn.speaker)}, {"content", turn.content}});
    }
    json body{{"model", request.model.name},
              {"messages", std::move(messages)},
              {"temperature", request.sampling.temperature},
              {"top_p", request.sampling.top_p}};
    if (request.sampling.max_tokens) body["max_tokens"] = *request.sampling.max_tokens;
    return body;
}

json anthropic_body(const ChatRequest& request) {
    json messages = json::array();
    std::string system;
    for (const auto& turn : request.turns) {
        if (turn.speaker == Speaker::System) {
            system = turn.content;
        } else {
            messages.push_back({{"role", to_string(turn.speaker)}, {"content", turn.content}});
        }
    }
    json body{{"model", request.model.name},
              {"system", std::move(system)},
              {"messages", std::move(messages)},
              {"max_tokens", request.sampling.max_tokens.value_or(kAnthropicDefaultMaxTokens)},
              {"temperature", request.sampling.temperature},
              {"top_p", request.sampling.top_p}};
    return body;
}

struct ParsedCompletion {
    std::string text;
    std::int64_t prompt_tokens = 0;
    std::int64_t completion_tokens = 0;
};

ParsedCompletion parse_openai_response(const json& doc) {
    ParsedCompletion out;
    const auto& choices = doc.at("choices");
    if (choices.empty()) throw TransportError("response contains no choices");
    out.text = choices.at(0).at("message").at("content").get<std::string>();
    if (doc.contains("usage")) {
        out.prompt_tokens = doc["usage"].value("prompt_tokens", 0);
        out.completion_tokens = doc["usage"].value("completion_tokens", 0);
    }
    return out;
}

ParsedCompletion parse_anthropic_response(const json& doc) {
    ParsedCompletion out;
    for (const auto& item : doc.at("content")) {
        if (item.value("type", "text") == "text") out.text += item.value("text", "");
    }
    if (doc.contains("usage")) {
        out.prompt_tokens = doc["usage"].value("input_tokens", 0);
        out.completion_tokens = doc["usage"].value("output_tokens", 0);
    }
    return out;
}

std::string excerpt(const std::string& body) {
    constexpr std::size_t kMax = 300;
    if (body.size() <= kMax) return body;
    return body.substr(0, kMax) + "...";
}

} // namespace

HttpBackend::HttpBackend(HttpBackendConfig config, std::shared_ptr<UsageLedger> ledger,
                         std::shared_ptr<TokenBudget> budget)
    : Backend(std::move(ledger), std::move(budget)), config_(std::move(config)) {
    if (config_.kind == ProviderKind::Scripted) {
        throw std::invalid_argument("HttpBackend cannot serve the scripted provider kind");
    }
    const std::string base =
        config_.base_url.empty() ? default_base_url(config_.kind) : config_.base_url;
    std::tie(base_url_, path_prefix_) = split_base_url(base);
    if (config_.retry.max_attempts < 1) {
        throw std::invalid_argument("retry policy needs at least one attempt");
    }
    rng_.seed(config_.jitter_seed != 0 ? config_.jitter_seed : std::random_device{}());
}

std::string HttpBackend::endpoint_path() const {
    return path_prefix_ + (config_.kind == ProviderKind::AnthropicCompatible
                               ? "/v1/messages"
                               : "/v1/chat/completions");
}

std::string HttpBackend::credential_env_var(ProviderKind kind) {
    return kind == ProviderKind::AnthropicCompatible ? "ANTHROPIC_API_KEY" : "OPENAI_API_KEY";
}

std::string HttpBackend::resolved_api_key() const {
    if (!config_.api_key.empty()) return config_.api_key;
    return env_or_empty(credential_env_var(config_.kind).c_str());
}

std::chrono::milliseconds HttpBackend::backoff_delay(int retry_index) {
    const double base = static_cast<double>(config_.retry.base_delay.count());
    double delay = base * static_cast<double>(1LL << retry_index);
    if (config_.retry.jitter > 0.0) {
        std::lock_guard lock(rng_mutex_);
        std::uniform_real_distribution<double> dist(-config_.retry.jitter, config_.retry.jitter);
        delay *= 1.0 + dist(rng_);
    }
    return std::chrono::milliseconds(static_cast<std::int64_t>(std::max(0.0, delay)));
}

std::string HttpBackend::complete(const ChatRequest& request) {
    validate_request(request);

    const std::string api_key = resolved_api_key();
    const bool default_endpoint = config_.base_url.empty();
    if (api_key.empty() && default_endpoint) {
        throw AuthError("no API key configured; set " + credential_env_var(config_.kind));
    }

    const json body_json = config_.kind == ProviderKind::AnthropicCompatible
                               ? anthropic_body(request)
                               : openai_body(request);
    const std::string body = body_json.dump();
    budget_->charge(estimate_prompt_tokens(request));

    std::ostream* trace = config_.trace
                              ? (config_.trace_sink ? config_.trace_sink : &std::clog)
                              : nullptr;
    if (trace) {
        *trace << "POST " << base_url_ << endpoint_path() << "\n"
               << (config_.kind == ProviderKind::AnthropicCompatible ? "x-api-key: ***"
                                                                     : "Authorization: ***")
               << "\n"
               << body << "\n";
    }

    const auto started = std::chrono::steady_clock::now();
    std::string last_failure = "no attempt made";
    for (int attempt = 1; attempt <= config_.retry.max_attempts; ++attempt) {
        if (config_.limiter) config_.limiter->acquire();

        httplib::Client client(base_url_);
        client.set_read_timeout(config_.read_timeout);
        client.set_connection_timeout(config_.read_timeout);
        httplib::Headers headers;
        if (config_.kind == ProviderKind::AnthropicCompatible) {
            if (!api_key.empty()) headers.emplace("x-api-key", api_key);
            headers.emplace("anthropic-version", kAnthropicVersion);
        } else if (!api_key.empty()) {
            headers.emplace("Authorization", "Bearer " + api_key);
        }

        auto result = client.Post(endpoint_path(), headers, body, "application/json");

        bool retryable = false;
        if (!result) {
            last_failure = "connection error: " + httplib::to_string(result.error());
            retryable = true;
        } else if (result->status == 200) {
            ParsedCompletion parsed;
            try {
                const auto doc = json::parse(result->body);
                parsed = config_.kind == ProviderKind::AnthropicCompatible
                             ? parse_anthropic_response(doc)
                             : parse_openai_response(doc);
            } catch (const json::exception& ex) {
                throw TransportError(std::string("malformed provider response: ") + ex.what());
            }
            if (trace) *trace << result->body << "\n";

            const auto latency = std::chrono::duration<double, std::milli>(
                                     std::chrono::steady_clock::now() - started)
                                     .count();
            if (parsed.prompt_tokens == 0) parsed.prompt_tokens = estimate_prompt_tokens(request);
            if (parsed.completion_tokens == 0) {
                parsed.completion_tokens = estimate_tokens(parsed.text);
            }
            budget_->charge(estimate_tokens(parsed.text));

            CallRecord record;
            record.model = request.model.name;
            record.tag = request.tag;
            record.request_fingerprint = request_fingerprint(request);
            record.attempts = attempt;
            record.prompt_tokens = parsed.prompt_tokens;
            record.completion_tokens = parsed.completion_tokens;
            record.latency_ms = latency;
            ledger_->record(std::move(record));
            return parsed.text;
        } else if (result->status == 401 || result->status == 403) {
            throw AuthError("credential rejected (HTTP " + std::to_string(result->status) +
                            "): " + excerpt(result->body));
        } else if (result->status == 429 || result->status >= 500) {
            last_failure =
                "HTTP " + std::to_string(result->status) + ": " + excerpt(result->body);
            retryable = true;
        } else {
            throw TransportError("HTTP " + std::to_string(result->status) + ": " +
                                 excerpt(result->body));
        }

        if (retryable && attempt < config_.retry.max_attempts) {
            if (trace) *trace << "retrying after failure: " << last_failure << "\n";
            std::this_thread::sleep_for(backoff_delay(attempt - 1));
        }
    }
    throw TransportError("request failed after " + std::to_string(config_.retry.max_attempts) +
                         " attempts; last failure: " + last_failure);
}

} // namespace jot::provider

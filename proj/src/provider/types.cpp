#include "jot/provider/types.hpp"

#include <charconv>
#include <stdexcept>

namespace jot::provider {
namespace {

void append_double(std::string& out, double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) throw std::logic_error("double formatting failed");
    out.append(buf, ptr);
}

} // namespace

std::string to_string(Speaker speaker) {
    switch (speaker) {
        case Speaker::System: return "system";
        case Speaker::User: return "user";
        case Speaker::Assistant: return "assistant";
    }
    throw std::logic_error("invalid Speaker");
}

std::string to_string(ModelTier tier) {
    return tier == ModelTier::High ? "high" : "low";
}

ModelTier tier_from_string(const std::string& text) {
    if (text == "high") return ModelTier::High;
    if (text == "low") return ModelTier::Low;
    throw std::invalid_argument("unknown model tier: " + text);
}

std::string to_string(ProviderKind kind) {
    switch (kind) {
        case ProviderKind::OpenAiCompatible: return "openai";
        case ProviderKind::AnthropicCompatible: return "anthropic";
        case ProviderKind::Scripted: return "scripted";
    }
    throw std::logic_error("invalid ProviderKind");
}

ProviderKind provider_kind_from_string(const std::string& text) {
    if (text == "openai") return ProviderKind::OpenAiCompatible;
    if (text == "anthropic") return ProviderKind::AnthropicCompatible;
    if (text == "scripted") return ProviderKind::Scripted;
    throw std::invalid_argument("unknown provider kind: " + text);
}

void validate_request(const ChatRequest& request) {
    if (request.turns.empty()) throw std::invalid_argument("request has no turns");
    if (request.turns.front().speaker != Speaker::System) {
        throw std::invalid_argument("first turn must be the System turn");
    }
    for (std::size_t i = 1; i < request.turns.size(); ++i) {
        if (request.turns[i].speaker == Speaker::System) {
            throw std::invalid_argument("request contains more than one System turn");
        }
    }
    for (const auto& turn : request.turns) {
        if (turn.speaker != Speaker::Assistant && turn.content.empty()) {
            throw std::invalid_argument("System and User turns must be non-empty");
        }
    }
    if (request.model.name.empty()) throw std::invalid_argument("model name is empty");
    if (request.sampling.temperature < 0.0 || request.sampling.temperature > 2.0) {
        throw std::invalid_argument("temperature out of [0,2]");
    }
    if (request.sampling.top_p <= 0.0 || request.sampling.top_p > 1.0) {
        throw std::invalid_argument("top_p out of (0,1]");
    }
    if (request.sampling.max_tokens && *request.sampling.max_tokens <= 0) {
        throw std::invalid_argument("max_tokens must be positive");
    }
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char byte : data) {
        hash ^= byte;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string to_hex(std::uint64_t value) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[value & 0xf];
        value >>= 4;
    }
    return out;
}

std::string request_fingerprint(const ChatRequest& request) {
    std::string canonical;
    canonical += request.model.name;
    canonical += '\x1e';
    append_double(canonical, request.sampling.temperature);
    canonical += '\x1e';
    append_double(canonical, request.sampling.top_p);
    canonical += '\x1e';
    if (request.sampling.max_tokens) canonical += std::to_string(*request.sampling.max_tokens);
    for (const auto& turn : request.turns) {
        canonical += '\x1e';
        canonical += to_string(turn.speaker);
        canonical += '\x1f';
        canonical += turn.content;
    }
    return to_hex(fnv1a64(canonical));
}

} // namespace jot::provider

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace jot::provider {

enum class Speaker { System, User, Assistant };

std::string to_string(Speaker speaker);

struct ChatTurn {
    Speaker speaker = Speaker::User;
    std::string content;

    friend bool operator==(const ChatTurn&, const ChatTurn&) = default;
};

/// Paper defaults: temperature=1, top-p=1.
struct SamplingParams {
    double temperature = 1.0;
    double top_p = 1.0;
    std::optional<int> max_tokens;

    friend bool operator==(const SamplingParams&, const SamplingParams&) = default;
};

enum class ModelTier { High, Low };
enum class ProviderKind { OpenAiCompatible, AnthropicCompatible, Scripted };

std::string to_string(ModelTier tier);
ModelTier tier_from_string(const std::string& text);
std::string to_string(ProviderKind kind);
ProviderKind provider_kind_from_string(const std::string& text);

struct ModelRef {
    ModelTier tier = ModelTier::Low;
    std::string name;
    ProviderKind provider = ProviderKind::Scripted;

    friend bool operator==(const ModelRef&, const ModelRef&) = default;
};

/// Routing metadata: which agent issued the call and in which round.
/// Keys the scripted backend and attributes ledger entries; not part of the
/// request fingerprint.
struct CallTag {
    std::string role;
    int round = 0;

    std::string key() const { return role + ":" + std::to_string(round); }
    friend bool operator==(const CallTag&, const CallTag&) = default;
};

struct ChatRequest {
    std::vector<ChatTurn> turns;
    SamplingParams sampling;
    ModelRef model;
    CallTag tag;
};

/// Throws std::invalid_argument unless there is exactly one System turn, in
/// first position, and System/User turns are non-empty.
void validate_request(const ChatRequest& request);

/// FNV-1a 64-bit over a canonical serialization of model name, sampling
/// params, and turns. Stable across platforms and independent of retries.
std::string request_fingerprint(const ChatRequest& request);

std::uint64_t fnv1a64(std::string_view data);
std::string to_hex(std::uint64_t value);

} // namespace jot::provider

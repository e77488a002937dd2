#pragma once

#include <string>

#include "jot/provider/types.hpp"

namespace jot::engine {

enum class VerdictRule { Last, Majority };

std::string to_string(VerdictRule rule);
VerdictRule verdict_rule_from_string(const std::string& text);

/// Full JoT protocol configuration, ablation switches included.
struct JotConfig {
    int rounds = 3;
    bool include_lawyer = true;
    bool include_prosecutor = true;
    bool include_feedback = true;
    VerdictRule verdict_rule = VerdictRule::Last;
    provider::ModelRef judge_model{provider::ModelTier::High, "", provider::ProviderKind::Scripted};
    provider::ModelRef advocate_model{provider::ModelTier::Low, "",
                                      provider::ProviderKind::Scripted};
    provider::SamplingParams sampling;
    int parse_retries = 2;  // corrective re-prompts after a malformed ruling
};

/// Throws std::invalid_argument naming the offending field.
void validate(const JotConfig& config);

/// Stable hash of every protocol-relevant field; lands in the transcript.
std::string config_fingerprint(const JotConfig& config);

/// Provider calls one debate will issue: rounds x (advocates + judge).
int calls_per_debate(const JotConfig& config);

} // namespace jot::engine

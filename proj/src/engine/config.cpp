#include "jot/engine/config.hpp"

#include <charconv>
#include <stdexcept>

namespace jot::engine {
namespace {

void append_double(std::string& out, double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) throw std::logic_error("double formatting failed");
    out.append(buf, ptr);
}

} // namespace

std::string to_string(VerdictRule rule) {
    return rule == VerdictRule::Last ? "last" : "majority";
}

VerdictRule verdict_rule_from_string(const std::string& text) {
    if (text == "last") return VerdictRule::Last;
    if (text == "majority") return VerdictRule::Majority;
    throw std::invalid_argument("unknown verdict rule: " + text);
}

void validate(const JotConfig& config) {
    if (config.rounds < 1) throw std::invalid_argument("rounds must be >= 1");
    if (!config.include_lawyer && !config.include_prosecutor) {
        throw std::invalid_argument("at least one of include_lawyer/include_prosecutor must be on");
    }
    if (config.judge_model.tier != provider::ModelTier::High) {
        throw std::invalid_argument("judge_model must be tier high");
    }
    if (config.advocate_model.tier != provider::ModelTier::Low) {
        throw std::invalid_argument("advocate_model must be tier low");
    }
    if (config.judge_model.name.empty()) throw std::invalid_argument("judge_model.name is empty");
    if (config.advocate_model.name.empty()) {
        throw std::invalid_argument("advocate_model.name is empty");
    }
    if (config.parse_retries < 0) throw std::invalid_argument("parse_retries must be >= 0");
}

std::string config_fingerprint(const JotConfig& config) {
    std::string canonical = "jot";
    canonical += '\x1e';
    canonical += std::to_string(config.rounds);
    canonical += config.include_lawyer ? "L" : "-";
    canonical += config.include_prosecutor ? "P" : "-";
    canonical += config.include_feedback ? "F" : "-";
    canonical += to_string(config.verdict_rule);
    canonical += '\x1e';
    canonical += config.judge_model.name;
    canonical += '\x1e';
    canonical += config.advocate_model.name;
    canonical += '\x1e';
    append_double(canonical, config.sampling.temperature);
    canonical += '\x1e';
    append_double(canonical, config.sampling.top_p);
    if (config.sampling.max_tokens) {
        canonical += '\x1e';
        canonical += std::to_string(*config.sampling.max_tokens);
    }
    return provider::to_hex(provider::fnv1a64(canonical));
}

int calls_per_debate(const JotConfig& config) {
    const int advocates = (config.include_lawyer ? 1 : 0) + (config.include_prosecutor ? 1 : 0);
    return config.rounds * (advocates + 1);
}

} // namespace jot::engine

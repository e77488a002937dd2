#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "jot/baselines/baselines.hpp"
#include "jot/datasets/loader.hpp"
#include "jot/engine/config.hpp"

namespace jot::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One experiment: a dataset, a method, and execution parameters.
/// Parsed from a versioned JSON file; unknown fields are rejected.
struct ExperimentConfig {
    int schema_version = 1;
    datasets::DatasetSpec dataset;
    std::string method = "jot";  // "jot" or a baseline method name
    engine::JotConfig jot;
    baselines::BaselineConfig baseline;
    int runs = 10;
    int workers = 1;
    std::optional<std::int64_t> budget_tokens;
    std::filesystem::path output_dir;
    std::uint64_t seed = 0;
    provider::SamplingParams sampling;
    std::optional<std::filesystem::path> script_path;
    std::optional<std::filesystem::path> prompt_dir;
    std::optional<std::filesystem::path> fewshot_bank;
    std::optional<std::string> openai_base_url;
    std::optional<std::string> anthropic_base_url;
    std::optional<double> rate_limit_rps;
};

ExperimentConfig config_from_json(const nlohmann::json& doc);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const ExperimentConfig& config);

/// Throws ConfigError naming the offending field.
void validate(const ExperimentConfig& config);

/// Content hash of the experiment identity: everything except output_dir and
/// workers, so identical experiments collide (intentionally, for resume)
/// wherever they are stored and however they are parallelized.
std::string experiment_id(const ExperimentConfig& config);

/// True when the method consumes the shared few-shot bank.
bool uses_fewshot_bank(const ExperimentConfig& config);

/// Model calls one task evaluation will issue.
int calls_per_task(const ExperimentConfig& config);

/// "judge/advocate" for debate protocols, the single model name otherwise.
std::string model_label(const ExperimentConfig& config);

} // namespace jot::cli

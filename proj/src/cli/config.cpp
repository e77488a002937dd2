#include "jot/cli/config.hpp"

#include "jot/core/transcript.hpp"

namespace jot::cli {
namespace {

using nlohmann::json;

void expect_keys(const json& obj, const std::string& context,
                 std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) throw ConfigError("unknown field: " + context + "." + item.key());
    }
}

template <typename T>
T require(const json& obj, const std::string& context, const char* key) {
    if (!obj.contains(key)) throw ConfigError("missing field: " + context + "." + key);
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("invalid value for field: " + context + "." + key);
    }
}

template <typename T>
T optional_or(const json& obj, const std::string& context, const char* key, T fallback) {
    if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("invalid value for field: " + context + "." + key);
    }
}

provider::ModelRef model_from_json(const json& obj, const std::string& context) {
    expect_keys(obj, context, {"provider", "name", "tier"});
    provider::ModelRef model;
    try {
        model.provider = provider::provider_kind_from_string(
            require<std::string>(obj, context, "provider"));
        model.tier = provider::tier_from_string(require<std::string>(obj, context, "tier"));
    } catch (const std::invalid_argument& ex) {
        throw ConfigError(context + ": " + ex.what());
    }
    model.name = require<std::string>(obj, context, "name");
    if (model.name.empty()) throw ConfigError("empty field: " + context + ".name");
    return model;
}

json model_to_json(const provider::ModelRef& model) {
    return json{{"provider", provider::to_string(model.provider)},
                {"name", model.name},
                {"tier", provider::to_string(model.tier)}};
}

provider::SamplingParams sampling_from_json(const json& obj, const std::string& context) {
    expect_keys(obj, context, {"temperature", "top_p", "max_tokens"});
    provider::SamplingParams params;
    params.temperature = optional_or<double>(obj, context, "temperature", 1.0);
    params.top_p = optional_or<double>(obj, context, "top_p", 1.0);
    if (obj.contains("max_tokens") && !obj.at("max_tokens").is_null()) {
        params.max_tokens = require<int>(obj, context, "max_tokens");
    }
    return params;
}

json sampling_to_json(const provider::SamplingParams& params) {
    json doc{{"temperature", params.temperature}, {"top_p", params.top_p}};
    if (params.max_tokens) doc["max_tokens"] = *params.max_tokens;
    return doc;
}

} // namespace

ExperimentConfig config_from_json(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config root must be a JSON object");
    expect_keys(doc, "config",
                {"schema_version", "dataset", "method", "runs", "workers", "budget_tokens",
                 "output_dir", "seed", "sampling", "script_path", "prompt_dir", "fewshot_bank",
                 "openai_base_url", "anthropic_base_url", "rate_limit_rps"});

    ExperimentConfig config;
    config.schema_version = require<int>(doc, "config", "schema_version");
    if (config.schema_version != 1) {
        throw ConfigError("unsupported config.schema_version: " +
                          std::to_string(config.schema_version));
    }

    const json& dataset = doc.contains("dataset") ? doc.at("dataset")
                                                  : throw ConfigError("missing field: config.dataset");
    expect_keys(dataset, "dataset", {"name", "path", "limit", "seed"});
    try {
        config.dataset.name =
            datasets::dataset_from_string(require<std::string>(dataset, "dataset", "name"));
    } catch (const std::invalid_argument& ex) {
        throw ConfigError(std::string("dataset.name: ") + ex.what());
    }
    config.dataset.path = require<std::string>(dataset, "dataset", "path");
    if (dataset.contains("limit") && !dataset.at("limit").is_null()) {
        config.dataset.limit = require<int>(dataset, "dataset", "limit");
    }
    config.dataset.seed = optional_or<std::uint64_t>(dataset, "dataset", "seed", 0);

    const json& method = doc.contains("method") ? doc.at("method")
                                                : throw ConfigError("missing field: config.method");
    config.method = require<std::string>(method, "method", "kind");
    config.sampling = doc.contains("sampling") ? sampling_from_json(doc.at("sampling"), "sampling")
                                               : provider::SamplingParams{};

    if (config.method == "jot") {
        expect_keys(method, "method",
                    {"kind", "rounds", "include_lawyer", "include_prosecutor", "include_feedback",
                     "verdict_rule", "parse_retries", "judge_model", "advocate_model"});
        config.jot.rounds = optional_or<int>(method, "method", "rounds", 3);
        config.jot.include_lawyer = optional_or<bool>(method, "method", "include_lawyer", true);
        config.jot.include_prosecutor =
            optional_or<bool>(method, "method", "include_prosecutor", true);
        config.jot.include_feedback =
            optional_or<bool>(method, "method", "include_feedback", true);
        try {
            config.jot.verdict_rule = engine::verdict_rule_from_string(
                optional_or<std::string>(method, "method", "verdict_rule", "last"));
        } catch (const std::invalid_argument& ex) {
            throw ConfigError(std::string("method.verdict_rule: ") + ex.what());
        }
        config.jot.parse_retries = optional_or<int>(method, "method", "parse_retries", 2);
        if (!method.contains("judge_model")) throw ConfigError("missing field: method.judge_model");
        if (!method.contains("advocate_model")) {
            throw ConfigError("missing field: method.advocate_model");
        }
        config.jot.judge_model = model_from_json(method.at("judge_model"), "method.judge_model");
        config.jot.advocate_model =
            model_from_json(method.at("advocate_model"), "method.advocate_model");
        config.jot.sampling = config.sampling;
    } else {
        try {
            config.baseline.method = baselines::method_from_string(config.method);
        } catch (const std::invalid_argument& ex) {
            throw ConfigError(std::string("method.kind: ") + ex.what());
        }
        expect_keys(method, "method",
                    {"kind", "samples", "shots", "rounds", "debater_model", "judge_model"});
        config.baseline.samples = optional_or<int>(method, "method", "samples", 3);
        config.baseline.shots = optional_or<int>(method, "method", "shots", 3);
        config.baseline.rounds = optional_or<int>(method, "method", "rounds", 3);
        if (!method.contains("debater_model")) {
            throw ConfigError("missing field: method.debater_model");
        }
        config.baseline.debater_model =
            model_from_json(method.at("debater_model"), "method.debater_model");
        if (method.contains("judge_model")) {
            config.baseline.judge_model =
                model_from_json(method.at("judge_model"), "method.judge_model");
        } else if (config.baseline.method == baselines::Method::KhanDebate) {
            throw ConfigError("missing field: method.judge_model");
        }
        config.baseline.sampling = config.sampling;
    }

    config.runs = optional_or<int>(doc, "config", "runs", 10);
    config.workers = optional_or<int>(doc, "config", "workers", 1);
    if (doc.contains("budget_tokens") && !doc.at("budget_tokens").is_null()) {
        config.budget_tokens = require<std::int64_t>(doc, "config", "budget_tokens");
    }
    config.output_dir = require<std::string>(doc, "config", "output_dir");
    config.seed = optional_or<std::uint64_t>(doc, "config", "seed", 0);
    for (const auto& [key, target] :
         std::initializer_list<std::pair<const char*, std::optional<std::filesystem::path>*>>{
             {"script_path", &config.script_path},
             {"prompt_dir", &config.prompt_dir},
             {"fewshot_bank", &config.fewshot_bank}}) {
        if (doc.contains(key) && !doc.at(key).is_null()) {
            *target = std::filesystem::path(require<std::string>(doc, "config", key));
        }
    }
    for (const auto& [key, target] :
         std::initializer_list<std::pair<const char*, std::optional<std::string>*>>{
             {"openai_base_url", &config.openai_base_url},
             {"anthropic_base_url", &config.anthropic_base_url}}) {
        if (doc.contains(key) && !doc.at(key).is_null()) {
            *target = require<std::string>(doc, "config", key);
        }
    }
    if (doc.contains("rate_limit_rps") && !doc.at("rate_limit_rps").is_null()) {
        config.rate_limit_rps = require<double>(doc, "config", "rate_limit_rps");
    }

    validate(config);
    return config;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::exception& ex) {
        throw ConfigError("config is not valid JSON: " + std::string(ex.what()));
    }
    return config_from_json(doc);
}

json config_to_json(const ExperimentConfig& config) {
    json method;
    if (config.method == "jot") {
        method = json{{"kind", "jot"},
                      {"rounds", config.jot.rounds},
                      {"include_lawyer", config.jot.include_lawyer},
                      {"include_prosecutor", config.jot.include_prosecutor},
                      {"include_feedback", config.jot.include_feedback},
                      {"verdict_rule", engine::to_string(config.jot.verdict_rule)},
                      {"parse_retries", config.jot.parse_retries},
                      {"judge_model", model_to_json(config.jot.judge_model)},
                      {"advocate_model", model_to_json(config.jot.advocate_model)}};
    } else {
        method = json{{"kind", config.method},
                      {"samples", config.baseline.samples},
                      {"shots", config.baseline.shots},
                      {"rounds", config.baseline.rounds},
                      {"debater_model", model_to_json(config.baseline.debater_model)},
                      {"judge_model", model_to_json(config.baseline.judge_model)}};
    }
    json doc{{"schema_version", config.schema_version},
             {"dataset",
              {{"name", datasets::to_string(config.dataset.name)},
               {"path", config.dataset.path.generic_string()},
               {"seed", config.dataset.seed}}},
             {"method", std::move(method)},
             {"runs", config.runs},
             {"workers", config.workers},
             {"output_dir", config.output_dir.generic_string()},
             {"seed", config.seed},
             {"sampling", sampling_to_json(config.sampling)}};
    if (config.dataset.limit) doc["dataset"]["limit"] = *config.dataset.limit;
    if (config.budget_tokens) doc["budget_tokens"] = *config.budget_tokens;
    if (config.script_path) doc["script_path"] = config.script_path->generic_string();
    if (config.prompt_dir) doc["prompt_dir"] = config.prompt_dir->generic_string();
    if (config.fewshot_bank) doc["fewshot_bank"] = config.fewshot_bank->generic_string();
    if (config.openai_base_url) doc["openai_base_url"] = *config.openai_base_url;
    if (config.anthropic_base_url) doc["anthropic_base_url"] = *config.anthropic_base_url;
    if (config.rate_limit_rps) doc["rate_limit_rps"] = *config.rate_limit_rps;
    return doc;
}

void validate(const ExperimentConfig& config) {
    if (config.runs < 1) throw ConfigError("config.runs must be >= 1");
    if (config.workers < 1) throw ConfigError("config.workers must be >= 1");
    if (config.output_dir.empty()) throw ConfigError("config.output_dir must be set");
    if (config.dataset.path.empty()) throw ConfigError("dataset.path must be set");
    if (config.dataset.limit && *config.dataset.limit < 1) {
        throw ConfigError("dataset.limit must be >= 1");
    }
    if (config.budget_tokens && *config.budget_tokens < 1) {
        throw ConfigError("config.budget_tokens must be >= 1");
    }
    if (config.rate_limit_rps && *config.rate_limit_rps <= 0.0) {
        throw ConfigError("config.rate_limit_rps must be positive");
    }
    try {
        if (config.method == "jot") {
            engine::validate(config.jot);
        } else {
            baselines::validate(config.baseline);
        }
    } catch (const std::invalid_argument& ex) {
        throw ConfigError("method: " + std::string(ex.what()));
    }

    // Scripted models need a script; remote models must not mix with one.
    const bool scripted =
        config.method == "jot"
            ? config.jot.judge_model.provider == provider::ProviderKind::Scripted ||
                  config.jot.advocate_model.provider == provider::ProviderKind::Scripted
            : config.baseline.debater_model.provider == provider::ProviderKind::Scripted ||
                  (config.baseline.method == baselines::Method::KhanDebate &&
                   config.baseline.judge_model.provider == provider::ProviderKind::Scripted);
    if (scripted && !config.script_path) {
        throw ConfigError("config.script_path is required for scripted models");
    }
}

std::string experiment_id(const ExperimentConfig& config) {
    json identity = config_to_json(config);
    identity.erase("output_dir");
    identity.erase("workers");
    return provider::to_hex(provider::fnv1a64(identity.dump()));
}

bool uses_fewshot_bank(const ExperimentConfig& config) {
    if (config.method == "jot") return false;
    switch (config.baseline.method) {
        case baselines::Method::FewShot:
        case baselines::Method::CoT:
        case baselines::Method::SelfConsistency: return config.baseline.shots > 0;
        default: return false;
    }
}

int calls_per_task(const ExperimentConfig& config) {
    return config.method == "jot" ? engine::calls_per_debate(config.jot)
                                  : baselines::calls_per_task(config.baseline);
}

std::string model_label(const ExperimentConfig& config) {
    if (config.method == "jot") {
        return config.jot.judge_model.name + "/" + config.jot.advocate_model.name;
    }
    if (config.baseline.method == baselines::Method::KhanDebate) {
        return config.baseline.debater_model.name + "/" + config.baseline.judge_model.name;
    }
    return config.baseline.debater_model.name;
}

} // namespace jot::cli

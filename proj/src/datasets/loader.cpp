#include "jot/datasets/loader.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <random>

#include <json.hpp>

#include "jot/core/normalize.hpp"
#include "jot/core/transcript.hpp"

namespace jot::datasets {
namespace {

using nlohmann::json;

struct RecordIssue {
    enum Kind { Schema, Label } kind;
    std::string message;
};

// Shared loader core: calls `emit` per good task and `issue` per bad record.
// Strict loading turns the first issue into a thrown exception; validation
// collects them all.
using TaskSink = std::function<void(BinaryTask)>;
using IssueSink = std::function<void(const RecordIssue&)>;

std::string trimmed_copy(std::string text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
        text.erase(text.begin());
    }
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
        text.pop_back();
    }
    return text;
}

int scan_bbh(const DatasetSpec& spec, const TaskSink& emit, const IssueSink& issue) {
    json doc;
    try {
        doc = json::parse(read_file(spec.path));
    } catch (const std::runtime_error& ex) {
        throw IoError("cannot read " + spec.path.string() + ": " + ex.what());
    }
    if (!doc.is_object() || !doc.contains("examples") || !doc["examples"].is_array()) {
        throw SchemaError("not a BBH task file (missing top-level \"examples\" array): " +
                          spec.path.string());
    }
    const PositionPair positions = positions_for(spec.name);
    const std::string dataset = to_string(spec.name);
    int index = 0;
    for (const auto& record : doc["examples"]) {
        const std::string id = dataset + "-" + std::to_string(index);
        if (!record.is_object() || !record.contains("input") || !record.contains("target") ||
            !record["input"].is_string() || !record["target"].is_string()) {
            issue({RecordIssue::Schema,
                   "record " + std::to_string(index) + ": expected {input, target} strings"});
            ++index;
            continue;
        }
        const std::string input = record["input"].get<std::string>();
        const std::string target = trimmed_copy(record["target"].get<std::string>());
        if (input.empty()) {
            issue({RecordIssue::Schema, "record " + std::to_string(index) + ": empty input"});
            ++index;
            continue;
        }
        Label gold;
        if (target == positions.positive()) {
            gold = Label::Positive;
        } else if (target == positions.negative()) {
            gold = Label::Negative;
        } else {
            issue({RecordIssue::Label, "record " + id + ": target \"" + target +
                                           "\" is not one of \"" + positions.positive() +
                                           "\"/\"" + positions.negative() + "\""});
            ++index;
            continue;
        }
        emit(BinaryTask{id, dataset, input, positions, gold});
        ++index;
    }
    return index;
}

int scan_winogrande(const DatasetSpec& spec, const TaskSink& emit, const IssueSink& issue) {
    std::string content;
    try {
        content = read_file(spec.path);
    } catch (const std::runtime_error& ex) {
        throw IoError("cannot read " + spec.path.string() + ": " + ex.what());
    }
    const std::string dataset = to_string(spec.name);
    int index = 0;
    std::size_t start = 0;
    while (start < content.size()) {
        std::size_t end = content.find('\n', start);
        if (end == std::string::npos) end = content.size();
        std::string line = content.substr(start, end - start);
        start = end + 1;
        if (trimmed_copy(line).empty()) continue;

        const std::string tag = "record " + std::to_string(index);
        ++index;
        json record;
        try {
            record = json::parse(line);
        } catch (const json::exception& ex) {
            issue({RecordIssue::Schema, tag + ": invalid JSON line: " + ex.what()});
            continue;
        }
        bool ok = true;
        for (const char* field : {"sentence", "option1", "option2", "answer"}) {
            if (!record.contains(field) || !record[field].is_string() ||
                record[field].get<std::string>().empty()) {
                issue({RecordIssue::Schema,
                       tag + ": missing or empty field \"" + std::string(field) + "\""});
                ok = false;
                break;
            }
        }
        if (!ok) continue;

        const std::string answer = record["answer"].get<std::string>();
        if (answer != "1" && answer != "2") {
            issue({RecordIssue::Label, tag + ": answer \"" + answer + "\" is not \"1\" or \"2\""});
            continue;
        }
        const std::string option1 = record["option1"].get<std::string>();
        const std::string option2 = record["option2"].get<std::string>();
        std::string id = record.value("qID", "");
        if (id.empty()) id = dataset + "-" + std::to_string(index - 1);

        std::optional<PositionPair> positions;
        try {
            positions.emplace(option1, option2);
        } catch (const std::invalid_argument& ex) {
            issue({RecordIssue::Label, tag + ": " + ex.what()});
            continue;
        }
        const std::string input = record["sentence"].get<std::string>() +
                                  "\nIn the sentence above, which option does the blank '_' "
                                  "refer to: " +
                                  option1 + " or " + option2 + "?";
        emit(BinaryTask{id, dataset, input, std::move(*positions),
                        answer == "1" ? Label::Positive : Label::Negative});
    }
    return index;
}

int scan_file(const DatasetSpec& spec, const TaskSink& emit, const IssueSink& issue) {
    return spec.name == DatasetName::Winogrande ? scan_winogrande(spec, emit, issue)
                                                : scan_bbh(spec, emit, issue);
}

[[noreturn]] void rethrow(const RecordIssue& problem, const DatasetSpec& spec) {
    const std::string message = to_string(spec.name) + ": " + problem.message;
    if (problem.kind == RecordIssue::Schema) throw SchemaError(message);
    throw LabelError(message);
}

std::vector<BinaryTask> load_strict(const DatasetSpec& spec) {
    std::vector<BinaryTask> tasks;
    scan_file(
        spec, [&tasks](BinaryTask task) { tasks.push_back(std::move(task)); },
        [&spec](const RecordIssue& problem) { rethrow(problem, spec); });
    return tasks;
}

// Bounded draw without modulo bias; mt19937_64 output is standardized, so
// selections replay identically on every platform.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t threshold = (~bound + 1) % bound;  // 2^64 mod bound
    while (true) {
        const std::uint64_t draw = rng();
        if (draw >= threshold) return draw % bound;
    }
}

} // namespace

std::string to_string(DatasetName name) {
    switch (name) {
        case DatasetName::BooleanExpressions: return "boolean_expressions";
        case DatasetName::CausalJudgement: return "causal_judgement";
        case DatasetName::Navigate: return "navigate";
        case DatasetName::WebOfLies: return "web_of_lies";
        case DatasetName::FormalFallacies: return "formal_fallacies";
        case DatasetName::SportsUnderstanding: return "sports_understanding";
        case DatasetName::Winogrande: return "winogrande";
    }
    throw std::logic_error("invalid DatasetName");
}

DatasetName dataset_from_string(const std::string& text) {
    if (text == "boolean_expressions") return DatasetName::BooleanExpressions;
    if (text == "causal_judgement") return DatasetName::CausalJudgement;
    if (text == "navigate") return DatasetName::Navigate;
    if (text == "web_of_lies") return DatasetName::WebOfLies;
    if (text == "formal_fallacies") return DatasetName::FormalFallacies;
    if (text == "sports_understanding") return DatasetName::SportsUnderstanding;
    if (text == "winogrande") return DatasetName::Winogrande;
    throw std::invalid_argument("unknown dataset: " + text);
}

PositionPair positions_for(DatasetName name) {
    switch (name) {
        case DatasetName::BooleanExpressions: return {"True", "False"};
        case DatasetName::CausalJudgement: return {"Yes", "No"};
        case DatasetName::Navigate: return {"Yes", "No"};
        case DatasetName::WebOfLies: return {"Yes", "No"};
        case DatasetName::FormalFallacies: return {"valid", "invalid"};
        case DatasetName::SportsUnderstanding: return {"yes", "no"};
        case DatasetName::Winogrande:
            throw std::invalid_argument("winogrande positions are per-record option texts");
    }
    throw std::logic_error("invalid DatasetName");
}

std::vector<BinaryTask> load_bbh(const DatasetSpec& spec) {
    if (spec.name == DatasetName::Winogrande) {
        throw std::invalid_argument("load_bbh cannot load winogrande");
    }
    return load_strict(spec);
}

std::vector<BinaryTask> load_winogrande(const DatasetSpec& spec) {
    if (spec.name != DatasetName::Winogrande) {
        throw std::invalid_argument("load_winogrande requires the winogrande dataset");
    }
    return load_strict(spec);
}

std::vector<BinaryTask> load(const DatasetSpec& spec) {
    std::vector<BinaryTask> tasks = load_strict(spec);
    if (spec.limit) return subsample(tasks, *spec.limit, spec.seed);
    return tasks;
}

std::vector<BinaryTask> subsample(const std::vector<BinaryTask>& tasks, int limit,
                                  std::uint64_t seed) {
    if (limit < 1) throw std::invalid_argument("limit must be >= 1");
    const auto population = tasks.size();
    if (static_cast<std::size_t>(limit) > population) {
        throw std::invalid_argument("limit " + std::to_string(limit) +
                                    " exceeds population " + std::to_string(population));
    }
    std::vector<std::size_t> indices(population);
    for (std::size_t i = 0; i < population; ++i) indices[i] = i;

    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < static_cast<std::size_t>(limit); ++i) {
        const std::size_t j = i + bounded(rng, population - i);
        std::swap(indices[i], indices[j]);
    }
    indices.resize(static_cast<std::size_t>(limit));
    std::sort(indices.begin(), indices.end());  // keep file order

    std::vector<BinaryTask> selected;
    selected.reserve(indices.size());
    for (std::size_t index : indices) selected.push_back(tasks[index]);
    return selected;
}

ValidationReport validate_file(const DatasetSpec& spec) {
    ValidationReport report;
    report.records = scan_file(
        spec, [&report](BinaryTask) { ++report.loaded; },
        [&report](const RecordIssue& problem) {
            (problem.kind == RecordIssue::Schema ? report.schema_errors : report.label_errors) +=
                1;
            report.diagnostics.push_back(problem.message);
        });
    return report;
}

} // namespace jot::datasets

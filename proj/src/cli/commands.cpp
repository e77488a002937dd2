#include "jot/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "jot/core/normalize.hpp"
#include "jot/core/transcript.hpp"
#include "jot/engine/debate.hpp"
#include "jot/eval/report.hpp"
#include "jot/provider/errors.hpp"
#include "jot/provider/http_backend.hpp"
#include "jot/provider/scripted.hpp"
#include "jot/rulings/parser.hpp"

namespace jot::cli {
namespace {

using nlohmann::json;

std::string sanitize_id(const std::string& id) {
    std::string safe;
    safe.reserve(id.size());
    for (char c : id) {
        const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ||
                        c == '.';
        safe.push_back(ok ? c : '_');
    }
    return safe.empty() ? "task" : safe;
}

std::filesystem::path record_path(const std::filesystem::path& dir, int run,
                                  const std::string& task_id) {
    return dir / "records" / ("run" + std::to_string(run)) / (sanitize_id(task_id) + ".json");
}

std::filesystem::path transcript_rel_path(int run, const std::string& task_id) {
    return std::filesystem::path("transcripts") / ("run" + std::to_string(run)) /
           (sanitize_id(task_id) + ".json");
}

/// Builds backends for one experiment. HTTP backends are shared across the
/// worker pool; scripted backends are created fresh per evaluation so every
/// debate consumes the keyed script from its start.
class BackendFactory {
public:
    BackendFactory(const ExperimentConfig& config, const RunOptions& options)
        : config_(config),
          ledger_(std::make_shared<provider::UsageLedger>()),
          budget_(std::make_shared<provider::TokenBudget>(config.budget_tokens)),
          trace_(options.trace) {
        if (config.rate_limit_rps) {
            limiter_ = std::make_shared<provider::RateLimiter>(*config.rate_limit_rps,
                                                               *config.rate_limit_rps);
        }
    }

    const std::shared_ptr<provider::UsageLedger>& ledger() const { return ledger_; }

    std::shared_ptr<provider::Backend> backend_for(const provider::ModelRef& model) {
        if (model.provider == provider::ProviderKind::Scripted) {
            return provider::ScriptedBackend::from_file(*config_.script_path, ledger_, budget_);
        }
        const std::string base_url =
            model.provider == provider::ProviderKind::AnthropicCompatible
                ? config_.anthropic_base_url.value_or("")
                : config_.openai_base_url.value_or("");
        const std::string cache_key = provider::to_string(model.provider) + "|" + base_url;
        std::lock_guard lock(mutex_);
        auto it = cache_.find(cache_key);
        if (it != cache_.end()) return it->second;
        provider::HttpBackendConfig http;
        http.kind = model.provider;
        http.base_url = base_url;
        http.trace = trace_;
        http.limiter = limiter_;
        auto backend = std::make_shared<provider::HttpBackend>(std::move(http), ledger_, budget_);
        cache_.emplace(cache_key, backend);
        return backend;
    }

private:
    const ExperimentConfig& config_;
    std::shared_ptr<provider::UsageLedger> ledger_;
    std::shared_ptr<provider::TokenBudget> budget_;
    std::shared_ptr<provider::RateLimiter> limiter_;
    bool trace_ = false;
    std::mutex mutex_;
    std::map<std::string, std::shared_ptr<provider::Backend>> cache_;
};

struct Outcome {
    RunRecord record;
    std::optional<DebateTranscript> transcript;
};

Outcome evaluate_task(const ExperimentConfig& config, const BinaryTask& task,
                      const std::vector<baselines::FewShotExample>& bank,
                      BackendFactory& factory, const engine::PromptLibrary& prompts) {
    Outcome outcome;
    if (config.method == "jot") {
        provider::TierBackends backends{factory.backend_for(config.jot.judge_model),
                                        factory.backend_for(config.jot.advocate_model)};
        try {
            DebateTranscript transcript = engine::run_debate(task, config.jot, backends, prompts);
            outcome.record = {task.id,   task.dataset,       "jot", transcript.verdict,
                              task.gold, std::optional<std::string>{}};
            outcome.transcript = std::move(transcript);
        } catch (const engine::RulingParseFailure&) {
            outcome.record = {task.id, task.dataset, "jot", std::nullopt, task.gold, std::nullopt};
        }
        return outcome;
    }

    auto& baseline = config.baseline;
    switch (baseline.method) {
        case baselines::Method::ZeroShot: {
            auto backend = factory.backend_for(baseline.debater_model);
            outcome.record = baselines::run_zero_shot(task, baseline, *backend);
            return outcome;
        }
        case baselines::Method::FewShot: {
            auto backend = factory.backend_for(baseline.debater_model);
            outcome.record = baselines::run_few_shot(task, baseline, bank, *backend);
            return outcome;
        }
        case baselines::Method::CoT: {
            auto backend = factory.backend_for(baseline.debater_model);
            outcome.record = baselines::run_cot(task, baseline, bank, *backend);
            return outcome;
        }
        case baselines::Method::SelfConsistency: {
            auto backend = factory.backend_for(baseline.debater_model);
            outcome.record = baselines::run_self_consistency(task, baseline, bank, *backend);
            return outcome;
        }
        case baselines::Method::KhanDebate: {
            provider::TierBackends backends{factory.backend_for(baseline.debater_model),
                                            factory.backend_for(baseline.judge_model)};
            try {
                auto result = baselines::run_khan_debate(task, baseline, backends);
                outcome.record = std::move(result.record);
                outcome.transcript = std::move(result.transcript);
            } catch (const engine::RulingParseFailure&) {
                outcome.record = {task.id,      task.dataset, "khan_debate",
                                  std::nullopt, task.gold,    std::nullopt};
            }
            return outcome;
        }
    }
    throw std::logic_error("invalid method");
}

// Evaluation pool: every task after the bank slice, subsampled when a limit
// is configured.
struct TaskPlan {
    std::vector<BinaryTask> bank_tasks;
    std::vector<BinaryTask> eval_tasks;
};

TaskPlan plan_tasks(const ExperimentConfig& config) {
    datasets::DatasetSpec unsliced = config.dataset;
    unsliced.limit.reset();
    std::vector<BinaryTask> all = datasets::load(unsliced);

    TaskPlan plan;
    std::size_t bank_size = 0;
    if (uses_fewshot_bank(config)) {
        bank_size = std::min<std::size_t>(static_cast<std::size_t>(config.baseline.shots),
                                          all.size());
        plan.bank_tasks.assign(all.begin(), all.begin() + static_cast<long>(bank_size));
    }
    std::vector<BinaryTask> pool(all.begin() + static_cast<long>(bank_size), all.end());
    if (config.dataset.limit) {
        plan.eval_tasks = datasets::subsample(pool, *config.dataset.limit, config.dataset.seed);
    } else {
        plan.eval_tasks = std::move(pool);
    }
    return plan;
}

std::vector<eval::MetricReport> score_runs(const std::filesystem::path& dir, int runs,
                                           const std::string& model) {
    std::vector<eval::MetricReport> reports;
    for (int run = 1; run <= runs; ++run) {
        const auto run_dir = dir / "records" / ("run" + std::to_string(run));
        if (!std::filesystem::exists(run_dir)) continue;
        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(run_dir)) {
            if (entry.path().extension() == ".json") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        std::vector<RunRecord> records;
        records.reserve(files.size());
        for (const auto& file : files) {
            records.push_back(record_from_json(json::parse(read_file(file))));
        }
        if (!records.empty()) reports.push_back(eval::score(records, model));
    }
    return reports;
}

void append_error_line(const std::filesystem::path& path, std::mutex& mutex, int run,
                       const std::string& task_id, const std::string& message) {
    std::lock_guard lock(mutex);
    std::ofstream out(path, std::ios::app);
    out << json{{"run", run}, {"task_id", task_id}, {"error", message}}.dump() << "\n";
}

} // namespace

std::filesystem::path experiment_dir(const ExperimentConfig& config) {
    return config.output_dir / experiment_id(config);
}

json record_to_json(const RunRecord& record, int run) {
    json doc{{"task_id", record.task_id},
             {"dataset", record.dataset},
             {"method", record.method},
             {"predicted", to_string(record.predicted)},
             {"gold", to_string(record.gold)},
             {"run", run}};
    if (record.transcript_ref) doc["transcript_ref"] = *record.transcript_ref;
    return doc;
}

RunRecord record_from_json(const json& doc) {
    RunRecord record;
    record.task_id = doc.at("task_id").get<std::string>();
    record.dataset = doc.at("dataset").get<std::string>();
    record.method = doc.at("method").get<std::string>();
    record.predicted = prediction_from_string(doc.at("predicted").get<std::string>());
    record.gold = label_from_string(doc.at("gold").get<std::string>());
    if (doc.contains("transcript_ref")) {
        record.transcript_ref = doc.at("transcript_ref").get<std::string>();
    }
    return record;
}

int cmd_run(const ExperimentConfig& config, const RunOptions& options, std::ostream& out,
            std::ostream& err) {
    validate(config);
    const std::string id = experiment_id(config);
    const auto dir = experiment_dir(config);

    TaskPlan plan = plan_tasks(config);
    const int tasks_n = static_cast<int>(plan.eval_tasks.size());
    const int per_task = calls_per_task(config);
    if (tasks_n == 0) {
        err << "error: no evaluation tasks after bank slicing/subsampling\n";
        return 1;
    }

    out << "experiment " << id << "\n";
    out << "dataset " << datasets::to_string(config.dataset.name) << ": " << tasks_n
        << " evaluation tasks";
    if (!plan.bank_tasks.empty()) {
        out << " (" << plan.bank_tasks.size() << " held out for the few-shot bank)";
    }
    out << "\n";
    out << "method " << config.method << ": " << per_task << " calls per task\n";
    out << "plan: " << config.runs << " runs x " << tasks_n << " tasks\n";
    out << "planned model calls: " << static_cast<long long>(config.runs) * tasks_n * per_task
        << "\n";
    if (options.dry_run) {
        out << "dry-run: no provider calls made\n";
        return 0;
    }

    std::filesystem::create_directories(dir);
    write_file_atomic(dir / "config.json", config_to_json(config).dump(2) + "\n");

    const engine::PromptLibrary prompts = config.prompt_dir
                                              ? engine::PromptLibrary::from_directory(*config.prompt_dir)
                                              : engine::PromptLibrary::builtin();
    BackendFactory factory(config, options);

    // Few-shot bank: load when present, generate + persist otherwise. The
    // same bank file is reused byte-identically by every method sharing it.
    std::vector<baselines::FewShotExample> bank;
    if (uses_fewshot_bank(config)) {
        const auto bank_path = config.fewshot_bank.value_or(dir / "fewshot_bank.json");
        if (std::filesystem::exists(bank_path)) {
            bank = baselines::load_bank(bank_path);
        } else {
            auto backend = factory.backend_for(config.baseline.debater_model);
            bank = baselines::generate_fewshot_bank(plan.bank_tasks, *backend, config.baseline);
            baselines::save_bank(bank, bank_path);
        }
    }

    struct Pair {
        int run;
        int task_index;
    };
    std::vector<Pair> pairs;
    pairs.reserve(static_cast<std::size_t>(config.runs) * plan.eval_tasks.size());
    for (int run = 1; run <= config.runs; ++run) {
        for (int t = 0; t < tasks_n; ++t) pairs.push_back({run, t});
    }

    std::atomic<std::size_t> next{0};
    std::atomic<int> failures{0};
    std::atomic<int> performed{0};
    std::atomic<int> skipped{0};
    std::mutex error_mutex;
    const auto errors_path = dir / "errors.jsonl";

    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= pairs.size()) return;
            const auto [run, task_index] = pairs[i];
            const BinaryTask& task = plan.eval_tasks[static_cast<std::size_t>(task_index)];
            const auto path = record_path(dir, run, task.id);
            if (options.resume && std::filesystem::exists(path)) {
                skipped.fetch_add(1);
                continue;
            }
            try {
                Outcome outcome = evaluate_task(config, task, bank, factory, prompts);
                if (outcome.transcript) {
                    const auto rel = transcript_rel_path(run, task.id);
                    save_transcript(*outcome.transcript, dir / rel);
                    outcome.record.transcript_ref = rel.generic_string();
                }
                write_file_atomic(path, record_to_json(outcome.record, run).dump(2) + "\n");
                performed.fetch_add(1);
            } catch (const std::exception& ex) {
                failures.fetch_add(1);
                append_error_line(errors_path, error_mutex, run, task.id, ex.what());
            }
        }
    };

    const int worker_count =
        std::max(1, std::min<int>(options.workers.value_or(config.workers),
                                  static_cast<int>(pairs.size())));
    if (worker_count == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(worker_count));
        for (int i = 0; i < worker_count; ++i) threads.emplace_back(worker);
        for (auto& thread : threads) thread.join();
    }

    out << "evaluations: " << performed.load() << " performed, " << skipped.load()
        << " resumed, " << failures.load() << " failed\n";

    const auto reports = score_runs(dir, config.runs, model_label(config));
    if (reports.empty()) {
        err << "error: no records were produced; nothing to report\n";
        return 1;
    }
    const auto summary = eval::aggregate(reports);
    eval::emit_report_csv(reports, dir / "report.csv");
    eval::emit_summary_json(summary, dir / "report.json");
    out << "runs scored: " << reports.size() << "\n";
    out << "mean accuracy: " << eval::format_metric(summary.mean_accuracy)
        << "  mean f1: " << eval::format_metric(summary.mean_f1) << "\n";
    out << "report: " << (dir / "report.csv").generic_string() << "\n";

    const auto totals = factory.ledger()->totals();
    out << "provider calls: " << totals.calls << " (attempts " << totals.attempts
        << ", prompt tokens " << totals.prompt_tokens << ", completion tokens "
        << totals.completion_tokens << ")\n";

    return failures.load() == 0 ? 0 : 1;
}

int cmd_ablate(const ExperimentConfig& config, const SweepSpec& sweep, const RunOptions& options,
               std::ostream& out, std::ostream& err) {
    if (config.method != "jot") {
        err << "error: ablate requires a jot method configuration\n";
        return 1;
    }
    if (sweep.rounds.empty() || sweep.feedback.empty()) {
        err << "error: empty sweep axis\n";
        return 1;
    }

    struct Row {
        bool lawyer;
        bool prosecutor;
        int rounds;
        bool feedback;
        std::string id;
        std::size_t runs = 0;
        double mean_accuracy = 0.0;
        double mean_f1 = 0.0;
    };
    std::vector<Row> rows;
    int exit_code = 0;

    for (bool lawyer : {true, false}) {
        for (bool prosecutor : {true, false}) {
            if (!lawyer && !prosecutor) {
                err << "warning: skipping invalid cell (lawyer off, prosecutor off)\n";
                continue;
            }
            for (int rounds : sweep.rounds) {
                for (bool feedback : sweep.feedback) {
                    ExperimentConfig cell = config;
                    cell.jot.include_lawyer = lawyer;
                    cell.jot.include_prosecutor = prosecutor;
                    cell.jot.rounds = rounds;
                    cell.jot.include_feedback = feedback;
                    out << "--- cell lawyer=" << (lawyer ? "on" : "off")
                        << " prosecutor=" << (prosecutor ? "on" : "off") << " rounds=" << rounds
                        << " feedback=" << (feedback ? "on" : "off") << "\n";
                    const int rc = cmd_run(cell, options, out, err);
                    if (rc != 0) exit_code = rc;
                    if (options.dry_run) continue;

                    Row row{lawyer, prosecutor, rounds, feedback, experiment_id(cell)};
                    const auto report_path = experiment_dir(cell) / "report.json";
                    if (std::filesystem::exists(report_path)) {
                        const auto doc = json::parse(read_file(report_path));
                        row.runs = doc.at("runs").size();
                        row.mean_accuracy = doc.at("mean_accuracy").get<double>();
                        row.mean_f1 = doc.at("mean_f1").get<double>();
                    }
                    rows.push_back(std::move(row));
                }
            }
        }
    }

    if (!options.dry_run) {
        std::string csv =
            "lawyer,prosecutor,rounds,feedback,experiment,runs,mean_accuracy,mean_f1\n";
        for (const auto& row : rows) {
            csv += std::string(row.lawyer ? "on" : "off") + "," +
                   (row.prosecutor ? "on" : "off") + "," + std::to_string(row.rounds) + "," +
                   (row.feedback ? "on" : "off") + "," + row.id + "," +
                   std::to_string(row.runs) + "," + eval::format_metric(row.mean_accuracy) + "," +
                   eval::format_metric(row.mean_f1) + "\n";
        }
        const auto grid_path = config.output_dir / "ablation_report.csv";
        write_file_atomic(grid_path, csv);
        out << "ablation cells: " << rows.size() << "\n";
        out << "ablation report: " << grid_path.generic_string() << "\n";
    }
    return exit_code;
}

int cmd_replay(const std::filesystem::path& transcript_path, bool strict, std::ostream& out,
               std::ostream& err) {
    DebateTranscript transcript;
    try {
        transcript = load_transcript(transcript_path);
    } catch (const std::exception& ex) {
        err << "error: cannot load transcript: " << ex.what() << "\n";
        return 1;
    }

    std::vector<std::string> problems = validate_transcript(transcript);

    if (transcript.positions) {
        const rulings::ParseOptions parse_options{!strict};
        for (const auto& ruling : transcript.rulings) {
            const std::string where = "ruling round " + std::to_string(ruling.round);
            if (transcript.protocol == "khan") {
                const Prediction decision = normalize_label(ruling.raw, *transcript.positions);
                if (!decision) {
                    problems.push_back(where + ": raw decision no longer normalizes");
                } else if (*decision != ruling.decision) {
                    problems.push_back(where + ": re-normalized decision diverges from stored");
                }
                continue;
            }
            try {
                const JudgeRuling reparsed = rulings::parse_ruling(
                    ruling.raw, *transcript.positions, ruling.round, parse_options);
                if (reparsed.analysis != ruling.analysis) {
                    problems.push_back(where + ": analysis diverges on re-parse");
                }
                if (reparsed.feedback_to_lawyer != ruling.feedback_to_lawyer) {
                    problems.push_back(where + ": feedback_to_lawyer diverges on re-parse");
                }
                if (reparsed.feedback_to_prosecutor != ruling.feedback_to_prosecutor) {
                    problems.push_back(where + ": feedback_to_prosecutor diverges on re-parse");
                }
                if (reparsed.decision != ruling.decision) {
                    problems.push_back(where + ": decision diverges on re-parse");
                }
            } catch (const rulings::ParseFailure& failure) {
                problems.push_back(where + ": raw no longer parses: " + failure.what());
            }
        }
    } else {
        out << "note: transcript carries no positions; raw rulings not re-parsed\n";
    }

    if (problems.empty()) {
        out << "replay clean: " << transcript_path.generic_string() << "\n";
        return 0;
    }
    err << "validation failed: " << transcript_path.generic_string() << "\n";
    for (const auto& problem : problems) err << "  - " << problem << "\n";
    return 1;
}

int cmd_report(const std::filesystem::path& dir, std::ostream& out, std::ostream& err) {
    if (!std::filesystem::exists(dir / "records")) {
        err << "error: no records directory under " << dir.generic_string() << "\n";
        return 1;
    }
    std::string model;
    if (std::filesystem::exists(dir / "config.json")) {
        try {
            model = model_label(config_from_json(json::parse(read_file(dir / "config.json"))));
        } catch (const std::exception&) {
            // stale or foreign config copy; the report works without it
        }
    }
    // Runs are numbered from 1 with no upper bound; probe until a gap.
    int max_run = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir / "records")) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("run", 0) == 0) {
            try {
                max_run = std::max(max_run, std::stoi(name.substr(3)));
            } catch (const std::exception&) {
            }
        }
    }
    const auto reports = score_runs(dir, max_run, model);
    if (reports.empty()) {
        err << "error: no records found\n";
        return 1;
    }
    const auto summary = eval::aggregate(reports);
    eval::emit_report_csv(reports, dir / "report.csv");
    eval::emit_summary_json(summary, dir / "report.json");
    out << "runs scored: " << reports.size() << "\n";
    out << "mean accuracy: " << eval::format_metric(summary.mean_accuracy)
        << "  mean f1: " << eval::format_metric(summary.mean_f1) << "\n";
    out << eval::reports_to_csv(reports);
    return 0;
}

int cmd_datasets_validate(const datasets::DatasetSpec& spec, std::ostream& out,
                          std::ostream& err) {
    datasets::ValidationReport report;
    try {
        report = datasets::validate_file(spec);
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << "\n";
        return 1;
    }
    out << spec.path.generic_string() << ": " << report.records << " records, " << report.loaded
        << " loaded, " << report.schema_errors << " schema errors, " << report.label_errors
        << " label errors\n";
    for (const auto& diagnostic : report.diagnostics) out << "  - " << diagnostic << "\n";
    return report.schema_errors == 0 && report.label_errors == 0 ? 0 : 1;
}

} // namespace jot::cli

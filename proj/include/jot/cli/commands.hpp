#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include <json.hpp>

#include "jot/cli/config.hpp"

namespace jot::cli {

struct RunOptions {
    bool dry_run = false;
    bool resume = true;
    bool trace = false;
    std::optional<int> workers;  // overrides the config's worker count
};

/// Executes runs x tasks evaluations, writing per-task records and
/// transcripts under output_dir/<experiment-id>/ and a final report.
/// Completed (run, task) pairs found on disk are skipped when resuming.
/// Returns 0 iff there were no task-level errors and reports were written.
int cmd_run(const ExperimentConfig& config, const RunOptions& options, std::ostream& out,
            std::ostream& err);

/// Ablation sweep axes; the role on/off cross-product is always swept.
struct SweepSpec {
    std::vector<int> rounds{1, 3, 5};
    std::vector<bool> feedback{true, false};
};

/// Cross-product sweep over role inclusion, rounds, and feedback; each valid
/// cell is a full cmd_run. Emits a combined grid report in output_dir.
int cmd_ablate(const ExperimentConfig& config, const SweepSpec& sweep, const RunOptions& options,
               std::ostream& out, std::ostream& err);

/// Re-validates a stored transcript against every transcript invariant and
/// re-parses the raw rulings, reporting any divergence from stored fields.
int cmd_replay(const std::filesystem::path& transcript_path, bool strict, std::ostream& out,
               std::ostream& err);

/// Recomputes and re-emits the report for an existing experiment directory.
int cmd_report(const std::filesystem::path& experiment_dir, std::ostream& out, std::ostream& err);

/// Prints per-file schema/label diagnostics for a dataset file.
int cmd_datasets_validate(const datasets::DatasetSpec& spec, std::ostream& out, std::ostream& err);

std::filesystem::path experiment_dir(const ExperimentConfig& config);

nlohmann::json record_to_json(const RunRecord& record, int run);
RunRecord record_from_json(const nlohmann::json& doc);

} // namespace jot::cli

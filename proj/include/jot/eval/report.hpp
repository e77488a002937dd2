#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "jot/eval/metrics.hpp"

namespace jot::eval {

/// Fixed-point formatting: 4 decimal places, round half to even.
std::string format_metric(double value);

/// CSV with the documented column order:
/// dataset,method,model,n,accuracy,precision,recall,f1,unparseable
std::string reports_to_csv(const std::vector<MetricReport>& reports);

nlohmann::json report_to_json(const MetricReport& report);
nlohmann::json summary_to_json(const RunSummary& summary);
std::string summary_to_string(const RunSummary& summary);

/// Datasets x methods grid (Table-1 shape): one row per dataset, one column
/// per method in canonical order, each cell "accuracy/f1".
std::string grid_csv(const std::vector<MetricReport>& reports);

/// Re-emitting unchanged inputs yields byte-identical files.
void emit_report_csv(const std::vector<MetricReport>& reports, const std::filesystem::path& path);
void emit_summary_json(const RunSummary& summary, const std::filesystem::path& path);

} // namespace jot::eval

#include "jot/eval/report.hpp"

#include <algorithm>
#include <array>
#include <cfenv>
#include <cmath>
#include <map>
#include <set>

#include "jot/core/transcript.hpp"

namespace jot::eval {
namespace {

// Canonical method column order for grid reports.
constexpr std::array<std::string_view, 6> kMethodOrder = {
    "zero_shot", "few_shot", "cot", "self_consistency", "khan_debate", "jot"};

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string escaped = "\"";
    for (char c : field) {
        if (c == '"') escaped += '"';
        escaped += c;
    }
    escaped += '"';
    return escaped;
}

nlohmann::json quartiles_to_json(const Quartiles& q) {
    return nlohmann::json{{"min", q.min}, {"q1", q.q1}, {"median", q.median},
                          {"q3", q.q3},   {"max", q.max}};
}

} // namespace

std::string format_metric(double value) {
    // nearbyint under FE_TONEAREST rounds halves to even.
    const double scaled = std::nearbyint(value * 10000.0);
    auto units = static_cast<long long>(scaled);
    const bool negative = units < 0;
    if (negative) units = -units;
    std::string digits = std::to_string(units % 10000);
    digits.insert(0, 4 - digits.size(), '0');
    return (negative ? "-" : "") + std::to_string(units / 10000) + "." + digits;
}

std::string reports_to_csv(const std::vector<MetricReport>& reports) {
    std::string csv = "dataset,method,model,n,accuracy,precision,recall,f1,unparseable\n";
    for (const auto& r : reports) {
        csv += csv_escape(r.dataset) + "," + csv_escape(r.method) + "," + csv_escape(r.model) +
               "," + std::to_string(r.n) + "," + format_metric(r.accuracy) + "," +
               format_metric(r.precision) + "," + format_metric(r.recall) + "," +
               format_metric(r.f1) + "," + std::to_string(r.unparseable_count) + "\n";
    }
    return csv;
}

nlohmann::json report_to_json(const MetricReport& report) {
    return nlohmann::json{{"dataset", report.dataset},
                          {"method", report.method},
                          {"model", report.model},
                          {"n", report.n},
                          {"accuracy", report.accuracy},
                          {"precision", report.precision},
                          {"recall", report.recall},
                          {"f1", report.f1},
                          {"unparseable", report.unparseable_count}};
}

nlohmann::json summary_to_json(const RunSummary& summary) {
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& report : summary.runs) runs.push_back(report_to_json(report));
    return nlohmann::json{{"runs", runs},
                          {"mean_accuracy", summary.mean_accuracy},
                          {"mean_f1", summary.mean_f1},
                          {"accuracy_quartiles", quartiles_to_json(summary.accuracy_quartiles)},
                          {"f1_quartiles", quartiles_to_json(summary.f1_quartiles)}};
}

std::string summary_to_string(const RunSummary& summary) {
    return summary_to_json(summary).dump(2) + "\n";
}

std::string grid_csv(const std::vector<MetricReport>& reports) {
    std::set<std::string> datasets;
    std::set<std::string> present;
    std::map<std::pair<std::string, std::string>, const MetricReport*> cells;
    for (const auto& report : reports) {
        datasets.insert(report.dataset);
        present.insert(report.method);
        cells[{report.dataset, report.method}] = &report;
    }

    std::vector<std::string> columns;
    for (std::string_view method : kMethodOrder) {
        if (present.count(std::string(method))) columns.emplace_back(method);
    }
    for (const auto& method : present) {  // methods outside the canonical list go last
        if (std::find(columns.begin(), columns.end(), method) == columns.end()) {
            columns.push_back(method);
        }
    }

    std::string csv = "dataset";
    for (const auto& column : columns) csv += "," + csv_escape(column);
    csv += "\n";
    for (const auto& dataset : datasets) {
        csv += csv_escape(dataset);
        for (const auto& column : columns) {
            csv += ",";
            auto it = cells.find({dataset, column});
            if (it != cells.end()) {
                csv += format_metric(it->second->accuracy) + "/" + format_metric(it->second->f1);
            }
        }
        csv += "\n";
    }
    return csv;
}

void emit_report_csv(const std::vector<MetricReport>& reports,
                     const std::filesystem::path& path) {
    write_file_atomic(path, reports_to_csv(reports));
}

void emit_summary_json(const RunSummary& summary, const std::filesystem::path& path) {
    write_file_atomic(path, summary_to_string(summary));
}

} // namespace jot::eval

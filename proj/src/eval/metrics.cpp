#include "jot/eval/metrics.hpp"

#include <algorithm>

namespace jot::eval {

MetricReport score(const std::vector<RunRecord>& records, const std::string& model) {
    if (records.empty()) throw EmptyInput("score() needs at least one record");
    for (const auto& record : records) {
        if (record.method != records.front().method) {
            throw MixedKeys("records mix methods: " + records.front().method + " vs " +
                            record.method);
        }
        if (record.dataset != records.front().dataset) {
            throw MixedKeys("records mix datasets: " + records.front().dataset + " vs " +
                            record.dataset);
        }
    }

    long long tp = 0, fp = 0, fn = 0, tn = 0;
    int correct = 0;
    int unparseable = 0;
    for (const auto& record : records) {
        if (!record.predicted) ++unparseable;
        if (record.predicted && *record.predicted == record.gold) ++correct;
        const bool predicted_positive = record.predicted && *record.predicted == Label::Positive;
        if (record.gold == Label::Positive) {
            (predicted_positive ? tp : fn) += 1;
        } else {
            (predicted_positive ? fp : tn) += 1;
        }
    }

    MetricReport report;
    report.method = records.front().method;
    report.dataset = records.front().dataset;
    report.model = model;
    report.n = static_cast<int>(records.size());
    report.unparseable_count = unparseable;
    report.accuracy = static_cast<double>(correct) / static_cast<double>(report.n);
    report.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    report.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    report.f1 = report.precision + report.recall > 0.0
                    ? 2.0 * report.precision * report.recall / (report.precision + report.recall)
                    : 0.0;
    return report;
}

Quartiles quartiles(std::vector<double> values) {
    if (values.empty()) throw EmptyInput("quartiles() needs at least one value");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();

    auto median_of = [&values](std::size_t begin, std::size_t end) {
        const std::size_t len = end - begin;
        const std::size_t mid = begin + len / 2;
        if (len % 2 == 1) return values[mid];
        return (values[mid - 1] + values[mid]) / 2.0;
    };

    Quartiles q;
    q.min = values.front();
    q.max = values.back();
    q.median = median_of(0, n);
    // Inclusive halves: the middle element belongs to both when n is odd.
    const std::size_t lower_end = n % 2 == 1 ? n / 2 + 1 : n / 2;
    const std::size_t upper_begin = n / 2;
    q.q1 = median_of(0, lower_end);
    q.q3 = median_of(upper_begin, n);
    return q;
}

RunSummary aggregate(const std::vector<MetricReport>& reports) {
    if (reports.empty()) throw EmptyInput("aggregate() needs at least one report");
    RunSummary summary;
    summary.runs = reports;
    std::vector<double> accuracies, f1s;
    accuracies.reserve(reports.size());
    f1s.reserve(reports.size());
    for (const auto& report : reports) {
        accuracies.push_back(report.accuracy);
        f1s.push_back(report.f1);
        summary.mean_accuracy += report.accuracy;
        summary.mean_f1 += report.f1;
    }
    summary.mean_accuracy /= static_cast<double>(reports.size());
    summary.mean_f1 /= static_cast<double>(reports.size());
    summary.accuracy_quartiles = quartiles(accuracies);
    summary.f1_quartiles = quartiles(f1s);
    return summary;
}

} // namespace jot::eval

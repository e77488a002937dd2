#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "jot/core/types.hpp"

namespace jot::eval {

class EmptyInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The records span more than one method or dataset.
class MixedKeys : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Accuracy plus binary precision/recall/F1 with Positive (the lawyer's
/// position) as the positive class. Unparseable predictions count as
/// incorrect: FN when gold is Positive, TN otherwise.
struct MetricReport {
    std::string method;
    std::string dataset;
    std::string model;
    int n = 0;
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    int unparseable_count = 0;
};

struct Quartiles {
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
};

/// Multi-run aggregate: arithmetic means plus box-plot quartiles.
struct RunSummary {
    std::vector<MetricReport> runs;
    double mean_accuracy = 0.0;
    double mean_f1 = 0.0;
    Quartiles accuracy_quartiles;
    Quartiles f1_quartiles;
};

MetricReport score(const std::vector<RunRecord>& records, const std::string& model = "");

/// Inclusive-median quartiles (Tukey hinges): each half includes the median
/// element when n is odd.
Quartiles quartiles(std::vector<double> values);

RunSummary aggregate(const std::vector<MetricReport>& reports);

} // namespace jot::eval

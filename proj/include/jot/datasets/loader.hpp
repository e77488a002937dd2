#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "jot/core/types.hpp"

namespace jot::datasets {

enum class DatasetName {
    BooleanExpressions,
    CausalJudgement,
    Navigate,
    WebOfLies,
    FormalFallacies,
    SportsUnderstanding,
    Winogrande,
};

std::string to_string(DatasetName name);
DatasetName dataset_from_string(const std::string& text);

/// The verbatim (positive, negative) answer strings each dataset presents,
/// matching the public files' target vocabulary. Winogrande positions are
/// per-record option texts and have no fixed pair.
PositionPair positions_for(DatasetName name);

struct DatasetSpec {
    DatasetName name = DatasetName::BooleanExpressions;
    std::filesystem::path path;
    std::optional<int> limit;
    std::uint64_t seed = 0;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Structural problem with a record; the message names the record index.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A record's target/answer is not one of the admissible strings.
class LabelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// BBH task file: top-level object with an `examples` array of
/// {input, target} records. Throws on the first bad record.
std::vector<BinaryTask> load_bbh(const DatasetSpec& spec);

/// Winogrande JSONL: one {sentence, option1, option2, answer} object per
/// line, answer in {"1","2"}.
std::vector<BinaryTask> load_winogrande(const DatasetSpec& spec);

/// Dispatches on spec.name and applies seeded subsampling when a limit is
/// set. Output order is file order.
std::vector<BinaryTask> load(const DatasetSpec& spec);

/// Deterministic sample without replacement: a partial Fisher-Yates draw
/// over indices with a platform-stable bounded RNG, emitted in file order.
/// limit == population returns the identity selection.
std::vector<BinaryTask> subsample(const std::vector<BinaryTask>& tasks, int limit,
                                  std::uint64_t seed);

/// Lenient audit pass over one file: every record is checked and every
/// problem collected instead of thrown. Backs `jot datasets validate`.
struct ValidationReport {
    int records = 0;
    int loaded = 0;
    int schema_errors = 0;
    int label_errors = 0;
    std::vector<std::string> diagnostics;
};
ValidationReport validate_file(const DatasetSpec& spec);

} // namespace jot::datasets

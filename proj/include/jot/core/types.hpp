#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace jot {

/// Binary outcome space. Every gold answer and every verdict maps to one of
/// these two values; the positive side is always the lawyer's position.
enum class Label { Positive, Negative };

/// A model answer that could not be mapped to either position is represented
/// as an empty prediction rather than an error.
using Prediction = std::optional<Label>;

Label opposite(Label label);
std::string to_string(Label label);
std::string to_string(const Prediction& prediction);
Label label_from_string(const std::string& text);
Prediction prediction_from_string(const std::string& text);

enum class RoleId { Lawyer, Prosecutor, Judge };

std::string to_string(RoleId role);
RoleId role_from_string(const std::string& text);

/// The two task-specific answer strings, stored verbatim as shown to models.
/// Invariants: both non-empty, and distinct after case-folding and trimming.
class PositionPair {
public:
    PositionPair(std::string positive, std::string negative);

    const std::string& positive() const { return positive_; }
    const std::string& negative() const { return negative_; }
    const std::string& text_for(Label label) const;

    friend bool operator==(const PositionPair&, const PositionPair&) = default;

private:
    std::string positive_;
    std::string negative_;
};

/// One benchmark question with its two admissible positions and gold label.
struct BinaryTask {
    std::string id;
    std::string dataset;
    std::string input;
    PositionPair positions;
    Label gold = Label::Positive;
};

struct Utterance {
    RoleId role = RoleId::Lawyer;
    int round = 1;
    std::string content;
    std::string request_fingerprint;

    friend bool operator==(const Utterance&, const Utterance&) = default;
};

/// Parsed fields of one judge output block. `raw` preserves the verbatim
/// model output the fields were extracted from.
struct JudgeRuling {
    int round = 1;
    std::string analysis;
    std::string feedback_to_lawyer;
    std::string feedback_to_prosecutor;
    Label decision = Label::Positive;
    std::string raw;

    friend bool operator==(const JudgeRuling&, const JudgeRuling&) = default;
};

/// Ordered record of every utterance and ruling across rounds.
/// `protocol` distinguishes the JoT engine ("jot") from the Khan-debate
/// baseline ("khan"), whose judge speaks once at the end. The position pair
/// is carried so stored rulings can be re-parsed during replay.
struct DebateTranscript {
    std::string task_id;
    std::string config_fingerprint;
    std::string protocol = "jot";
    std::string verdict_rule = "last";
    std::optional<PositionPair> positions;
    std::vector<Utterance> utterances;
    std::vector<JudgeRuling> rulings;
    Label verdict = Label::Positive;

    friend bool operator==(const DebateTranscript&, const DebateTranscript&) = default;
};

/// One (task, method) evaluation outcome, the unit the metrics consume.
struct RunRecord {
    std::string task_id;
    std::string dataset;
    std::string method;
    Prediction predicted;
    Label gold = Label::Positive;
    std::optional<std::string> transcript_ref;

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

} // namespace jot

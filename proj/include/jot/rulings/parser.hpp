#pragma once

#include <stdexcept>
#include <string>

#include "jot/core/types.hpp"

namespace jot::rulings {

/// Raised when no well-formed `####` block exists, a labeled field is
/// missing, or the decision text matches neither position.
class ParseFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Tolerant mode (default) accepts `####` lines with surrounding whitespace,
/// case-insensitive labels, and arbitrary or absent parenthetical suffixes.
/// Strict mode demands the exact canonical block for conformance testing.
struct ParseOptions {
    bool tolerant = true;
};

/// Extracts the last well-formed `####`-delimited block from a judge
/// completion. The four labeled fields (Analysis, Feedback to Lawyer,
/// Feedback to Prosecutor, Final Decision) must all be present; the decision
/// text is mapped to a Label via normalize_label. `raw` is preserved
/// verbatim on the returned ruling.
JudgeRuling parse_ruling(const std::string& raw, const PositionPair& positions, int round,
                         const ParseOptions& options = {});

/// Emits the canonical block for a ruling; parse_ruling maps it back to an
/// equal ruling (continuation lines of multi-line fields are indented two
/// spaces so embedded label-like lines survive the round-trip).
std::string render_ruling(const JudgeRuling& ruling, const PositionPair& positions);

} // namespace jot::rulings

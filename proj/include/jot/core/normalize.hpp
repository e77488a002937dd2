#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "jot/core/types.hpp"

namespace jot {

/// Canonical comparison form: ASCII case-fold, punctuation mapped to spaces,
/// whitespace runs collapsed, ends trimmed.
std::string canonical(std::string_view text);

/// Maps a free-text completion onto one of the two positions.
///
/// Rule order: (1) canonicalize; (2) exact match against either position;
/// (3) bottom-up line scan for an answer marker ("Final Decision:",
/// "the answer is", ...) followed by a position string; (4) token-boundary
/// containment of exactly one position. Anything else is unparseable.
/// Total and deterministic; symmetric under swapping the positions.
Prediction normalize_label(std::string_view raw, const PositionPair& positions);

/// Locates the line that rule (3) above would accept, bottom-up.
/// Returns the zero-based line index and the matched label, or nothing.
/// Used by the few-shot bank splitter to separate rationale from answer.
struct AnswerLine {
    std::size_t line_index = 0;
    Label label = Label::Positive;
};
std::optional<AnswerLine> find_answer_line(std::string_view raw, const PositionPair& positions);

} // namespace jot

#include "jot/core/normalize.hpp"

#include <array>
#include <cctype>
#include <vector>

namespace jot {
namespace {

// Markers accepted by the answer-line rule, already in canonical form.
// Longer variants first so "final decision" is reported before "decision".
constexpr std::array<std::string_view, 10> kAnswerMarkers = {
    "final decision", "final answer", "final verdict", "the answer is",
    "answer is",      "decision is",  "verdict is",    "decision",
    "verdict",        "answer",
};

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            lines.emplace_back(text.substr(start));
            break;
        }
        lines.emplace_back(text.substr(start, end - start));
        start = end + 1;
    }
    return lines;
}

// True when `text` equals `prefix` or continues it at a token boundary.
bool matches_at_start(const std::string& text, const std::string& prefix) {
    if (text == prefix) return true;
    return text.size() > prefix.size() && text.compare(0, prefix.size(), prefix) == 0 &&
           text[prefix.size()] == ' ';
}

bool contains_token(const std::string& canon_text, const std::string& canon_needle) {
    const std::string padded = " " + canon_text + " ";
    const std::string needle = " " + canon_needle + " ";
    return padded.find(needle) != std::string::npos;
}

// Decides between the two canonical positions for the text following a
// marker. Prefers the longer position when one is a token-prefix of the
// other (e.g. positions "blue" / "blue car").
std::optional<Label> match_answer(const std::string& after, const std::string& canon_pos,
                                  const std::string& canon_neg) {
    const bool pos = matches_at_start(after, canon_pos);
    const bool neg = matches_at_start(after, canon_neg);
    if (pos && neg) {
        return canon_pos.size() > canon_neg.size() ? Label::Positive : Label::Negative;
    }
    if (pos) return Label::Positive;
    if (neg) return Label::Negative;
    return std::nullopt;
}

std::string trimmed(std::string text) {
    while (!text.empty() && text.front() == ' ') text.erase(text.begin());
    while (!text.empty() && text.back() == ' ') text.pop_back();
    return text;
}

// Scans one canonical line for the right-most marker occurrence that is
// directly followed by a position string.
std::optional<Label> scan_line(const std::string& canon_line, const std::string& canon_pos,
                               const std::string& canon_neg) {
    const std::string padded = " " + canon_line + " ";
    std::size_t best_after = std::string::npos;
    std::optional<Label> best;
    for (std::string_view marker : kAnswerMarkers) {
        const std::string needle = " " + std::string(marker) + " ";
        std::size_t from = 0;
        while (true) {
            std::size_t at = padded.find(needle, from);
            if (at == std::string::npos) break;
            std::size_t after = at + needle.size() - 1; // index into padded, past the space
            if (best_after == std::string::npos || after > best_after) {
                if (auto label = match_answer(trimmed(padded.substr(after)), canon_pos, canon_neg)) {
                    best_after = after;
                    best = label;
                }
            }
            from = at + 1;
        }
    }
    return best;
}

} // namespace

std::string canonical(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (char raw : text) {
        const auto c = static_cast<unsigned char>(raw);
        if (std::isalnum(c)) {
            if (pending_space && !out.empty()) out.push_back(' ');
            pending_space = false;
            out.push_back(static_cast<char>(std::tolower(c)));
        } else {
            pending_space = true;
        }
    }
    return out;
}

std::optional<AnswerLine> find_answer_line(std::string_view raw, const PositionPair& positions) {
    const std::string canon_pos = canonical(positions.positive());
    const std::string canon_neg = canonical(positions.negative());
    if (canon_pos.empty() || canon_neg.empty() || canon_pos == canon_neg) return std::nullopt;

    const auto lines = split_lines(raw);
    for (std::size_t i = lines.size(); i-- > 0;) {
        const std::string canon_line = canonical(lines[i]);
        if (canon_line.empty()) continue;
        if (auto label = scan_line(canon_line, canon_pos, canon_neg)) {
            return AnswerLine{i, *label};
        }
        // A line that IS a bare position also terminates the scan.
        if (canon_line == canon_pos) return AnswerLine{i, Label::Positive};
        if (canon_line == canon_neg) return AnswerLine{i, Label::Negative};
    }
    return std::nullopt;
}

Prediction normalize_label(std::string_view raw, const PositionPair& positions) {
    const std::string canon_raw = canonical(raw);
    const std::string canon_pos = canonical(positions.positive());
    const std::string canon_neg = canonical(positions.negative());
    if (canon_raw.empty() || canon_pos.empty() || canon_neg.empty() || canon_pos == canon_neg) {
        return std::nullopt;
    }

    // (2) exact match after canonicalization
    if (canon_raw == canon_pos) return Label::Positive;
    if (canon_raw == canon_neg) return Label::Negative;

    // (3) marker followed by a position, scanning lines bottom-up
    const auto lines = split_lines(raw);
    for (std::size_t i = lines.size(); i-- > 0;) {
        const std::string canon_line = canonical(lines[i]);
        if (canon_line.empty()) continue;
        if (auto label = scan_line(canon_line, canon_pos, canon_neg)) return label;
    }

    // (4) token-boundary containment of exactly one position
    const bool has_pos = contains_token(canon_raw, canon_pos);
    const bool has_neg = contains_token(canon_raw, canon_neg);
    if (has_pos != has_neg) return has_pos ? Label::Positive : Label::Negative;
    return std::nullopt;
}

} // namespace jot

#include "jot/rulings/parser.hpp"

#include <array>
#include <cctype>
#include <optional>
#include <vector>

#include "jot/core/normalize.hpp"

namespace jot::rulings {
namespace {

enum class FieldId { Analysis, FeedbackLawyer, FeedbackProsecutor, Decision };

struct FieldSpec {
    FieldId id;
    std::string_view label;                // matched case-insensitively
    std::string_view canonical_suffix;     // required verbatim in strict mode
};

// Longer labels first so "Feedback to Lawyer" never shadows a prefix.
constexpr std::array<FieldSpec, 4> kFields = {{
    {FieldId::FeedbackProsecutor, "feedback to prosecutor", " (Reason for win/lose)"},
    {FieldId::FeedbackLawyer, "feedback to lawyer", " (Reason for win/lose)"},
    {FieldId::Analysis, "analysis", " (Reasons for the decision)"},
    {FieldId::Decision, "final decision", ""},
}};

bool iequals_prefix(const std::string& line, std::string_view prefix) {
    if (line.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(line[i])) !=
            std::tolower(static_cast<unsigned char>(prefix[i]))) {
            return false;
        }
    }
    return true;
}

bool is_delimiter(const std::string& line, bool tolerant) {
    if (!tolerant) return line == "####";
    std::size_t begin = 0;
    std::size_t end = line.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(line[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(line[end - 1]))) --end;
    return end - begin == 4 && line.compare(begin, 4, "####") == 0;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        std::string line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        start = end + 1;
    }
    return lines;
}

// Matches a label at column 0: label text, optional parenthetical, colon.
// Returns the first content line (with the single space after ':' removed).
std::optional<std::pair<FieldId, std::string>> match_label_line(const std::string& line,
                                                                bool tolerant) {
    for (const auto& field : kFields) {
        if (!iequals_prefix(line, field.label)) continue;
        std::size_t pos = field.label.size();
        if (tolerant) {
            while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
            if (pos < line.size() && line[pos] == '(') {
                const auto close = line.find(')', pos);
                if (close == std::string::npos) continue;
                pos = close + 1;
                while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
            }
        } else {
            const auto& suffix = field.canonical_suffix;
            if (line.compare(pos, suffix.size(), suffix) != 0) continue;
            pos += suffix.size();
        }
        if (pos >= line.size() || line[pos] != ':') continue;
        ++pos;
        std::string rest = line.substr(pos);
        if (!rest.empty() && rest.front() == ' ') rest.erase(rest.begin());
        return std::make_pair(field.id, std::move(rest));
    }
    return std::nullopt;
}

struct BlockFields {
    std::string analysis;
    std::string feedback_lawyer;
    std::string feedback_prosecutor;
    std::string decision_text;
};

// Parses the lines strictly between two delimiter lines. Returns the reason
// the block is malformed, or nothing on success.
std::optional<std::string> parse_block(const std::vector<std::string>& lines, std::size_t begin,
                                       std::size_t end, bool tolerant, BlockFields& out) {
    std::optional<FieldId> current;
    bool seen[4] = {false, false, false, false};
    std::array<std::vector<std::string>, 4> content;

    for (std::size_t i = begin; i < end; ++i) {
        const std::string& line = lines[i];
        if (auto match = match_label_line(line, tolerant)) {
            const auto index = static_cast<std::size_t>(match->first);
            if (seen[index]) return "duplicate field label in block";
            seen[index] = true;
            current = match->first;
            content[index].push_back(std::move(match->second));
            continue;
        }
        if (!current) {
            if (tolerant) continue;  // preamble prose tolerated
            if (!line.empty()) return "unexpected text before the first field label";
            continue;
        }
        // Continuation line: strip the two-space indent render_ruling adds.
        std::string value = line;
        if (value.size() >= 2 && value[0] == ' ' && value[1] == ' ') value.erase(0, 2);
        content[static_cast<std::size_t>(*current)].push_back(std::move(value));
    }

    static const char* names[4] = {"Analysis", "Feedback to Lawyer", "Feedback to Prosecutor",
                                   "Final Decision"};
    for (std::size_t i = 0; i < 4; ++i) {
        if (!seen[i]) return std::string("missing field: ") + names[i];
    }

    auto join = [](const std::vector<std::string>& parts) {
        std::string joined;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i) joined += '\n';
            joined += parts[i];
        }
        return joined;
    };
    out.analysis = join(content[0]);
    out.feedback_lawyer = join(content[1]);
    out.feedback_prosecutor = join(content[2]);
    out.decision_text = join(content[3]);
    return std::nullopt;
}

} // namespace

JudgeRuling parse_ruling(const std::string& raw, const PositionPair& positions, int round,
                         const ParseOptions& options) {
    const auto lines = split_lines(raw);
    std::vector<std::size_t> delimiters;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (is_delimiter(lines[i], options.tolerant)) delimiters.push_back(i);
    }
    if (delimiters.size() < 2) {
        throw ParseFailure("no ####-delimited block found");
    }

    std::string last_reason = "no well-formed block between delimiters";
    for (std::size_t i = delimiters.size() - 1; i-- > 0;) {
        BlockFields fields;
        auto reason = parse_block(lines, delimiters[i] + 1, delimiters[i + 1], options.tolerant,
                                  fields);
        if (reason) {
            last_reason = *reason;
            continue;
        }
        const Prediction decision = normalize_label(fields.decision_text, positions);
        if (!decision) {
            last_reason = "decision text matches neither position: \"" + fields.decision_text +
                          "\"";
            continue;
        }
        JudgeRuling ruling;
        ruling.round = round;
        ruling.analysis = std::move(fields.analysis);
        ruling.feedback_to_lawyer = std::move(fields.feedback_lawyer);
        ruling.feedback_to_prosecutor = std::move(fields.feedback_prosecutor);
        ruling.decision = *decision;
        ruling.raw = raw;
        return ruling;
    }
    throw ParseFailure(last_reason);
}

std::string render_ruling(const JudgeRuling& ruling, const PositionPair& positions) {
    auto emit_field = [](std::string& out, std::string_view label, const std::string& value) {
        out += label;
        out += ": ";
        std::size_t start = 0;
        bool first = true;
        while (start <= value.size()) {
            std::size_t end = value.find('\n', start);
            const std::string_view line =
                std::string_view(value).substr(start, end == std::string::npos ? std::string::npos
                                                                               : end - start);
            if (!first) out += "  ";  // continuation indent; stripped by the parser
            out += line;
            out += '\n';
            first = false;
            if (end == std::string::npos) break;
            start = end + 1;
        }
    };

    std::string out = "####\n";
    emit_field(out, "Analysis (Reasons for the decision)", ruling.analysis);
    emit_field(out, "Feedback to Lawyer (Reason for win/lose)", ruling.feedback_to_lawyer);
    emit_field(out, "Feedback to Prosecutor (Reason for win/lose)", ruling.feedback_to_prosecutor);
    out += "Final Decision: ";
    out += positions.text_for(ruling.decision);
    out += "\n####\n";
    return out;
}

} // namespace jot::rulings

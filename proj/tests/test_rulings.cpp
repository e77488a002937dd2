#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "jot/rulings/parser.hpp"
#include "helpers.hpp"

using namespace jot;
using rulings::ParseFailure;
using rulings::ParseOptions;
using rulings::parse_ruling;
using rulings::render_ruling;

namespace {

const PositionPair kTrueFalse("True", "False");

// Random printable field text (letters, punctuation, newlines) that never
// contains a line reading "####", per the round-trip property's domain.
std::string random_field(std::mt19937_64& rng, bool allow_newlines) {
    static const std::string charset =
        "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 :()#.,-_/";
    while (true) {
        const std::size_t length = rng() % 60;
        std::string text;
        for (std::size_t i = 0; i < length; ++i) {
            if (allow_newlines && rng() % 12 == 0) {
                text += '\n';
            } else {
                text += charset[rng() % charset.size()];
            }
        }
        bool has_delimiter_line = false;
        std::size_t start = 0;
        while (start <= text.size()) {
            std::size_t end = text.find('\n', start);
            if (end == std::string::npos) end = text.size();
            std::string line = text.substr(start, end - start);
            while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.pop_back();
            std::size_t lead = 0;
            while (lead < line.size() && (line[lead] == ' ' || line[lead] == '\t')) ++lead;
            if (line.substr(lead) == "####") has_delimiter_line = true;
            if (end == text.size()) break;
            start = end + 1;
        }
        if (!has_delimiter_line) return text;
    }
}

JudgeRuling random_ruling(std::mt19937_64& rng) {
    JudgeRuling ruling;
    ruling.round = static_cast<int>(rng() % 5) + 1;
    ruling.analysis = random_field(rng, true);
    ruling.feedback_to_lawyer = random_field(rng, true);
    ruling.feedback_to_prosecutor = random_field(rng, true);
    ruling.decision = rng() % 2 == 0 ? Label::Positive : Label::Negative;
    return ruling;
}

} // namespace

TEST_CASE("parses the canonical block") {
    const std::string raw = jot::test::ruling_text("The formula evaluates to False.",
                                                   "Weak counterexample.", "Solid derivation.",
                                                   "True");
    const JudgeRuling ruling = parse_ruling(raw, kTrueFalse, 2);
    CHECK(ruling.round == 2);
    CHECK(ruling.analysis == "The formula evaluates to False.");
    CHECK(ruling.feedback_to_lawyer == "Weak counterexample.");
    CHECK(ruling.feedback_to_prosecutor == "Solid derivation.");
    CHECK(ruling.decision == Label::Positive);
    CHECK(ruling.raw == raw);
}

TEST_CASE("prose before and after the block is ignored") {
    const std::string block = jot::test::ruling_text("a", "b", "c", "False");
    const std::string framed = "Here is my judgment.\n" + block + "\nI hope this helps!";
    const JudgeRuling bare = parse_ruling(block, kTrueFalse, 1);
    const JudgeRuling wrapped = parse_ruling(framed, kTrueFalse, 1);
    CHECK(wrapped.analysis == bare.analysis);
    CHECK(wrapped.feedback_to_lawyer == bare.feedback_to_lawyer);
    CHECK(wrapped.feedback_to_prosecutor == bare.feedback_to_prosecutor);
    CHECK(wrapped.decision == bare.decision);
}

TEST_CASE("two complete blocks: the last one wins") {
    // Constructed fixture per the stated last-block rule: the second block
    // carries different fields and the opposite decision.
    const std::string raw = jot::test::ruling_text("first analysis", "fl1", "fp1", "True") +
                            "\nRevised judgment follows.\n" +
                            jot::test::ruling_text("second analysis", "fl2", "fp2", "False");
    const JudgeRuling ruling = parse_ruling(raw, kTrueFalse, 3);
    CHECK(ruling.analysis == "second analysis");
    CHECK(ruling.feedback_to_lawyer == "fl2");
    CHECK(ruling.feedback_to_prosecutor == "fp2");
    CHECK(ruling.decision == Label::Negative);
}

TEST_CASE("label matching is case-insensitive and parenthetical-tolerant") {
    const std::string raw =
        "####\n"
        "analysis: short\n"
        "FEEDBACK TO LAWYER (whatever text): fl\n"
        "Feedback to Prosecutor: fp\n"
        "final decision (the verdict): False\n"
        "####\n";
    const JudgeRuling ruling = parse_ruling(raw, kTrueFalse, 1);
    CHECK(ruling.analysis == "short");
    CHECK(ruling.feedback_to_lawyer == "fl");
    CHECK(ruling.feedback_to_prosecutor == "fp");
    CHECK(ruling.decision == Label::Negative);
}

TEST_CASE("tolerant mode accepts #### lines with surrounding whitespace") {
    const std::string raw =
        "####   \n"
        "Analysis (Reasons for the decision): a\n"
        "Feedback to Lawyer (Reason for win/lose): b\n"
        "Feedback to Prosecutor (Reason for win/lose): c\n"
        "Final Decision: True\n"
        "  ####\n";
    CHECK(parse_ruling(raw, kTrueFalse, 1).decision == Label::Positive);
    CHECK_THROWS_AS(parse_ruling(raw, kTrueFalse, 1, ParseOptions{false}), ParseFailure);
}

TEST_CASE("strict mode requires the exact canonical block") {
    const JudgeRuling ruling = []() {
        JudgeRuling r;
        r.round = 1;
        r.analysis = "a";
        r.feedback_to_lawyer = "b";
        r.feedback_to_prosecutor = "c";
        r.decision = Label::Positive;
        return r;
    }();
    const std::string canonical = render_ruling(ruling, kTrueFalse);
    CHECK(parse_ruling(canonical, kTrueFalse, 1, ParseOptions{false}).decision == Label::Positive);

    const std::string bare_labels =
        "####\nAnalysis: a\nFeedback to Lawyer: b\nFeedback to Prosecutor: c\n"
        "Final Decision: True\n####\n";
    CHECK(parse_ruling(bare_labels, kTrueFalse, 1).decision == Label::Positive);
    CHECK_THROWS_AS(parse_ruling(bare_labels, kTrueFalse, 1, ParseOptions{false}), ParseFailure);
}

TEST_CASE("failure modes name the problem") {
    CHECK_THROWS_WITH_AS(parse_ruling("no block here", kTrueFalse, 1),
                         doctest::Contains("no ####"), ParseFailure);

    const std::string missing =
        "####\nAnalysis: a\nFeedback to Lawyer: b\nFinal Decision: True\n####\n";
    CHECK_THROWS_WITH_AS(parse_ruling(missing, kTrueFalse, 1),
                         doctest::Contains("Feedback to Prosecutor"), ParseFailure);

    const std::string undecidable = jot::test::ruling_text("a", "b", "c", "perhaps");
    CHECK_THROWS_WITH_AS(parse_ruling(undecidable, kTrueFalse, 1),
                         doctest::Contains("neither position"), ParseFailure);
}

TEST_CASE("decision text may be a full sentence") {
    const std::string raw = jot::test::ruling_text("a", "b", "c", "The answer is True.");
    CHECK(parse_ruling(raw, kTrueFalse, 1).decision == Label::Positive);
}

TEST_CASE("render emits the position string for the decision") {
    JudgeRuling ruling;
    ruling.round = 1;
    ruling.analysis = "a";
    ruling.feedback_to_lawyer = "b";
    ruling.feedback_to_prosecutor = "c";
    ruling.decision = Label::Positive;
    const PositionPair vi("valid", "invalid");
    CHECK(render_ruling(ruling, vi).find("Final Decision: valid\n") != std::string::npos);
    ruling.decision = Label::Negative;
    CHECK(render_ruling(ruling, vi).find("Final Decision: invalid\n") != std::string::npos);
}

TEST_CASE("multi-line fields survive the round-trip") {
    JudgeRuling ruling;
    ruling.round = 2;
    ruling.analysis = "line one\nline two\n\nline four";
    ruling.feedback_to_lawyer = "Final Decision: not really\nstill feedback";
    ruling.feedback_to_prosecutor = "  leading spaces kept";
    ruling.decision = Label::Negative;
    const std::string rendered = render_ruling(ruling, kTrueFalse);
    const JudgeRuling back = parse_ruling(rendered, kTrueFalse, ruling.round);
    CHECK(back.analysis == ruling.analysis);
    CHECK(back.feedback_to_lawyer == ruling.feedback_to_lawyer);
    CHECK(back.feedback_to_prosecutor == ruling.feedback_to_prosecutor);
    CHECK(back.decision == ruling.decision);
    CHECK(back.raw == rendered);
}

TEST_CASE("property: parse(render(r)) == r over generated rulings") {
    std::mt19937_64 rng(99);
    const std::vector<PositionPair> position_pool = {
        {"True", "False"}, {"valid", "invalid"}, {"Yes", "No"}, {"blue car", "blue"}};
    for (int iteration = 0; iteration < 400; ++iteration) {
        const PositionPair& positions = position_pool[rng() % position_pool.size()];
        const JudgeRuling ruling = random_ruling(rng);
        const std::string rendered = render_ruling(ruling, positions);
        JudgeRuling back;
        REQUIRE_NOTHROW(back = parse_ruling(rendered, positions, ruling.round));
        CHECK(back.analysis == ruling.analysis);
        CHECK(back.feedback_to_lawyer == ruling.feedback_to_lawyer);
        CHECK(back.feedback_to_prosecutor == ruling.feedback_to_prosecutor);
        CHECK(back.decision == ruling.decision);
        CHECK(back.round == ruling.round);
        CHECK(back.raw == rendered);
    }
}

TEST_CASE("property: arbitrary input yields a value or ParseFailure, never a crash") {
    std::mt19937_64 rng(7);
    static const std::string charset = "#\n ABCdef:()01\tAnalysisFinalDecision";
    for (int iteration = 0; iteration < 2000; ++iteration) {
        std::string raw;
        const std::size_t length = rng() % 120;
        for (std::size_t i = 0; i < length; ++i) raw += charset[rng() % charset.size()];
        try {
            (void)parse_ruling(raw, kTrueFalse, 1);
        } catch (const ParseFailure&) {
            // expected for most inputs
        }
    }
}

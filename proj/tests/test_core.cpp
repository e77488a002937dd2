#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "jot/core/normalize.hpp"
#include "jot/core/transcript.hpp"
#include "jot/core/types.hpp"
#include "helpers.hpp"

using namespace jot;

TEST_CASE("PositionPair rejects empty and case-equal positions") {
    CHECK_THROWS_AS(PositionPair("", "False"), std::invalid_argument);
    CHECK_THROWS_AS(PositionPair("True", ""), std::invalid_argument);
    CHECK_THROWS_AS(PositionPair("True", "true"), std::invalid_argument);
    CHECK_THROWS_AS(PositionPair("  yes ", "YES"), std::invalid_argument);
    const PositionPair p("valid", "invalid");
    CHECK(p.text_for(Label::Positive) == "valid");
    CHECK(p.text_for(Label::Negative) == "invalid");
}

TEST_CASE("label and role string round-trips") {
    for (Label label : {Label::Positive, Label::Negative}) {
        CHECK(label_from_string(to_string(label)) == label);
    }
    for (RoleId role : {RoleId::Lawyer, RoleId::Prosecutor, RoleId::Judge}) {
        CHECK(role_from_string(to_string(role)) == role);
    }
    CHECK(prediction_from_string("unparseable") == Prediction{});
    CHECK(to_string(Prediction{}) == "unparseable");
}

TEST_CASE("canonical folds case, punctuation, and whitespace") {
    CHECK(canonical("  True.  ") == "true");
    CHECK(canonical("option1's referent") == "option1 s referent");
    CHECK(canonical("A\tB\n\nC") == "a b c");
    CHECK(canonical("...") == "");
}

TEST_CASE("normalize_label exact matches") {
    const PositionPair tf("True", "False");
    CHECK(normalize_label("True.", tf) == Label::Positive);
    CHECK(normalize_label("false", tf) == Label::Negative);
    CHECK(normalize_label("  FALSE!  ", tf) == Label::Negative);
}

TEST_CASE("normalize_label answer-marker rule") {
    // Derived by hand from the rule table: canonicalization leaves
    // "the answer is option1 because", the marker scan finds "answer is",
    // and the tail starts with position one at a token boundary.
    const PositionPair options("option1", "option2");
    CHECK(normalize_label("The answer is option1 because…", options) == Label::Positive);

    const PositionPair tf("True", "False");
    CHECK(normalize_label("Long reasoning...\nFinal Decision: False", tf) == Label::Negative);
    CHECK(normalize_label("Final Decision: The answer is True.", tf) == Label::Positive);
    CHECK(normalize_label("I considered both True and False.\nAnswer: True", tf) ==
          Label::Positive);
}

TEST_CASE("normalize_label containment rule needs a unique token match") {
    const PositionPair vi("valid", "invalid");
    CHECK(normalize_label("the argument is invalid", vi) == Label::Negative);
    CHECK(normalize_label("the argument is valid", vi) == Label::Positive);
    CHECK(normalize_label("valid invalid", vi) == Prediction{});
    const PositionPair tf("True", "False");
    CHECK(normalize_label("True False", tf) == Prediction{});
    CHECK(normalize_label("I cannot decide", tf) == Prediction{});
    CHECK(normalize_label("", tf) == Prediction{});
}

TEST_CASE("normalize_label prefers the longer position on a prefix clash") {
    const PositionPair pair("blue car", "blue");
    CHECK(normalize_label("Answer: blue car is correct", pair) == Label::Positive);
    CHECK(normalize_label("Answer: blue", pair) == Label::Negative);
}

TEST_CASE("swapping positions flips the label or keeps unparseable") {
    const std::vector<std::pair<std::string, std::string>> pairs = {
        {"True", "False"}, {"valid", "invalid"}, {"Yes", "No"}, {"option1", "option2"}};
    const std::vector<std::string> formats = {
        "{p}",
        "{p}.",
        "The answer is {p}",
        "reasoning about {q} first\nFinal Decision: {p}",
        "I believe {p} because of {p}",
        "{p} and {q} both appear",
        "no admissible content",
        "Answer: {p} since {q} fails",
    };
    std::mt19937_64 rng(1234);
    for (int iteration = 0; iteration < 500; ++iteration) {
        const auto& [a, b] = pairs[rng() % pairs.size()];
        std::string format = formats[rng() % formats.size()];
        const bool use_a = rng() % 2 == 0;
        std::string raw = format;
        auto replace_all = [](std::string& text, const std::string& slot,
                              const std::string& value) {
            std::size_t at = 0;
            while ((at = text.find(slot, at)) != std::string::npos) {
                text.replace(at, slot.size(), value);
                at += value.size();
            }
        };
        replace_all(raw, "{p}", use_a ? a : b);
        replace_all(raw, "{q}", use_a ? b : a);

        const PositionPair forward(a, b);
        const PositionPair swapped(b, a);
        const Prediction before = normalize_label(raw, forward);
        const Prediction after = normalize_label(raw, swapped);
        if (!before.has_value()) {
            CHECK(!after.has_value());
        } else {
            REQUIRE(after.has_value());
            CHECK(*after == opposite(*before));
        }
    }
}

namespace {

DebateTranscript sample_transcript() {
    DebateTranscript t;
    t.task_id = "task-1";
    t.config_fingerprint = "cafe";
    t.positions = PositionPair("True", "False");
    for (int r = 1; r <= 2; ++r) {
        t.utterances.push_back({RoleId::Lawyer, r, "L" + std::to_string(r), "f1"});
        t.utterances.push_back({RoleId::Prosecutor, r, "P" + std::to_string(r), "f2"});
        t.utterances.push_back({RoleId::Judge, r, "J" + std::to_string(r), "f3"});
        JudgeRuling ruling;
        ruling.round = r;
        ruling.analysis = "a";
        ruling.feedback_to_lawyer = "fl";
        ruling.feedback_to_prosecutor = "fp";
        ruling.decision = r == 2 ? Label::Negative : Label::Positive;
        ruling.raw = "raw";
        t.rulings.push_back(ruling);
    }
    t.verdict = Label::Negative;
    return t;
}

} // namespace

TEST_CASE("transcript JSON round-trip preserves every field") {
    const DebateTranscript t = sample_transcript();
    const DebateTranscript back = transcript_from_json(transcript_to_json(t));
    CHECK(back == t);
    CHECK(transcript_to_string(back) == transcript_to_string(t));
}

TEST_CASE("derive_verdict rules") {
    const auto rulings = sample_transcript().rulings;  // decisions P, N
    CHECK(derive_verdict(rulings, "last") == Label::Negative);
    CHECK(derive_verdict(rulings, "majority") == Label::Negative);  // tie -> last
    auto three = rulings;
    JudgeRuling extra;
    extra.round = 3;
    extra.decision = Label::Positive;
    extra.raw = "raw";
    three.push_back(extra);
    CHECK(derive_verdict(three, "last") == Label::Positive);
    CHECK(derive_verdict(three, "majority") == Label::Positive);
    CHECK_THROWS_AS(derive_verdict({}, "last"), std::invalid_argument);
    CHECK_THROWS_AS(derive_verdict(rulings, "median"), std::invalid_argument);
}

TEST_CASE("validate_transcript accepts engine-shaped transcripts") {
    CHECK(validate_transcript(sample_transcript()).empty());
}

TEST_CASE("validate_transcript catches corrupted verdicts") {
    DebateTranscript t = sample_transcript();
    t.verdict = Label::Positive;
    const auto errors = validate_transcript(t);
    REQUIRE(!errors.empty());
    bool mentions_verdict = false;
    for (const auto& error : errors) {
        if (error.find("verdict") != std::string::npos) mentions_verdict = true;
    }
    CHECK(mentions_verdict);
}

TEST_CASE("validate_transcript catches ordering violations") {
    DebateTranscript t = sample_transcript();
    std::swap(t.utterances[0], t.utterances[1]);  // prosecutor before lawyer
    CHECK(!validate_transcript(t).empty());

    t = sample_transcript();
    t.utterances.push_back({RoleId::Lawyer, 2, "dup", "f"});
    CHECK(!validate_transcript(t).empty());

    t = sample_transcript();
    t.rulings.pop_back();
    CHECK(!validate_transcript(t).empty());

    t = sample_transcript();
    t.utterances[3].content = "";
    CHECK(!validate_transcript(t).empty());
}

TEST_CASE("validate_transcript accepts the khan shape") {
    DebateTranscript t;
    t.task_id = "task-1";
    t.config_fingerprint = "beef";
    t.protocol = "khan";
    t.positions = PositionPair("True", "False");
    for (int r = 1; r <= 3; ++r) {
        t.utterances.push_back({RoleId::Lawyer, r, "A" + std::to_string(r), "f"});
        t.utterances.push_back({RoleId::Prosecutor, r, "B" + std::to_string(r), "f"});
    }
    t.utterances.push_back({RoleId::Judge, 3, "True", "f"});
    JudgeRuling ruling;
    ruling.round = 3;
    ruling.analysis = "True";
    ruling.decision = Label::Positive;
    ruling.raw = "True";
    t.rulings.push_back(ruling);
    t.verdict = Label::Positive;
    CHECK(validate_transcript(t).empty());

    // A mid-debate judge utterance breaks the khan shape.
    t.utterances.insert(t.utterances.begin() + 2, Utterance{RoleId::Judge, 1, "early", "f"});
    CHECK(!validate_transcript(t).empty());
}

TEST_CASE("write_file_atomic + read_file round-trip") {
    jot::test::TempDir dir;
    const auto path = dir.path() / "nested" / "file.txt";
    write_file_atomic(path, "payload\n");
    CHECK(read_file(path) == "payload\n");
    write_file_atomic(path, "second\n");
    CHECK(read_file(path) == "second\n");
}

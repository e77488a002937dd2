#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jot/core/transcript.hpp"
#include "jot/engine/debate.hpp"
#include "jot/provider/errors.hpp"
#include "helpers.hpp"

using namespace jot;
using namespace jot::engine;
using jot::test::debate_script;
using jot::test::ruling_text;
using jot::test::true_false_task;
using provider::ScriptedBackend;

namespace {

JotConfig scripted_config(int rounds = 3) {
    JotConfig config;
    config.rounds = rounds;
    config.judge_model = {provider::ModelTier::High, "script-high",
                          provider::ProviderKind::Scripted};
    config.advocate_model = {provider::ModelTier::Low, "script-low",
                             provider::ProviderKind::Scripted};
    return config;
}

struct Rig {
    std::shared_ptr<provider::UsageLedger> ledger = std::make_shared<provider::UsageLedger>();
    std::shared_ptr<ScriptedBackend> backend;
    provider::TierBackends backends;

    explicit Rig(ScriptedBackend::KeyedScript script)
        : backend(ScriptedBackend::keyed(std::move(script), ledger)),
          backends{backend, backend} {}
};

} // namespace

TEST_CASE("rendered lawyer prompt carries the position and the round count") {
    const PositionPair tf("True", "False");
    const std::string prompt = render_role_prompt(RoleId::Lawyer, tf, 3);
    CHECK(prompt.find("argue persuasively that the correct answer to the given input is True") !=
          std::string::npos);
    CHECK(prompt.find("3 opportunities to speak") != std::string::npos);
    CHECK(prompt.find("False") == std::string::npos);
}

TEST_CASE("rendered prosecutor prompt argues the negative position") {
    const PositionPair tf("True", "False");
    const std::string prompt = render_role_prompt(RoleId::Prosecutor, tf, 3);
    CHECK(prompt.find("argue persuasively that the correct answer to the given input is False") !=
          std::string::npos);
    CHECK(prompt.find("counter the lawyer's arguments") != std::string::npos);
}

TEST_CASE("rendered judge prompt has the no-tie rule and the output block") {
    const PositionPair tf("True", "False");
    const std::string prompt = render_role_prompt(RoleId::Judge, tf, 3);
    CHECK(prompt.find("There can be NO TIE") != std::string::npos);
    CHECK(prompt.find("Output Format (delimited by ####)") != std::string::npos);
    CHECK(prompt.find("Analysis (Reasons for the decision):") != std::string::npos);
    CHECK(prompt.find("Feedback to Lawyer (Reason for win/lose):") != std::string::npos);
    CHECK(prompt.find("Feedback to Prosecutor (Reason for win/lose):") != std::string::npos);
    CHECK(prompt.find("Final Decision: True/False") != std::string::npos);
    CHECK(prompt.find("issue 3 judgments in total") != std::string::npos);
}

TEST_CASE("round-count substitution follows the configured rounds") {
    const PositionPair tf("True", "False");
    CHECK(render_role_prompt(RoleId::Lawyer, tf, 1).find("a total of 1 opportunities") !=
          std::string::npos);
    CHECK(render_role_prompt(RoleId::Judge, tf, 5).find("issue 5 judgments in total") !=
          std::string::npos);
}

TEST_CASE("no placeholder survives rendering for any role") {
    const PositionPair pair("option1's referent", "option2's referent");
    for (RoleId role : {RoleId::Lawyer, RoleId::Prosecutor, RoleId::Judge}) {
        for (int rounds : {1, 3, 5}) {
            const std::string prompt = render_role_prompt(role, pair, rounds);
            CHECK(prompt.find("{positive}") == std::string::npos);
            CHECK(prompt.find("{negative}") == std::string::npos);
            CHECK(prompt.find("{rounds}") == std::string::npos);
            CHECK(prompt.find("<Positive Position>") == std::string::npos);
            CHECK(prompt.find("<Negative Position>") == std::string::npos);
        }
    }
}

TEST_CASE("shipped prompt files match the built-in templates") {
    const PromptLibrary files = PromptLibrary::from_directory(JOT_PROMPTS_DIR);
    for (RoleId role : {RoleId::Lawyer, RoleId::Prosecutor, RoleId::Judge}) {
        CHECK(files.raw(role) == PromptLibrary::builtin().raw(role));
    }
}

TEST_CASE("round-1 advocate context is exactly system + task input") {
    const BinaryTask task = true_false_task();
    const JotConfig config = scripted_config();
    DebateTranscript empty;
    const auto request = build_advocate_context(empty, task, RoleId::Lawyer, 1, config);
    REQUIRE(request.turns.size() == 2);
    CHECK(request.turns[0].speaker == provider::Speaker::System);
    CHECK(request.turns[1].speaker == provider::Speaker::User);
    CHECK(request.turns[1].content == task.input);
    CHECK(request.tag.key() == "lawyer:1");
    CHECK(request.model.name == "script-low");
}

namespace {

DebateTranscript two_round_history(const JotConfig& config, const BinaryTask& task) {
    Rig rig(debate_script(config.rounds, {"True", "False", "False"}));
    return run_debate(task, config, rig.backends);
}

} // namespace

TEST_CASE("round-2 lawyer context carries the opponent's text and own feedback") {
    const BinaryTask task = true_false_task();
    const JotConfig config = scripted_config();
    const DebateTranscript history = two_round_history(config, task);

    const auto request = build_advocate_context(history, task, RoleId::Lawyer, 2, config);
    REQUIRE(request.turns.size() == 4);  // system, task, assistant own, user update
    CHECK(request.turns[2].speaker == provider::Speaker::Assistant);
    CHECK(request.turns[2].content == "lawyer argument round 1");
    const std::string& update = request.turns[3].content;
    CHECK(update.find("prosecutor argument round 1") != std::string::npos);
    CHECK(update.find("FBL_token_1") != std::string::npos);
    CHECK(update.find("FBP_token_1") == std::string::npos);     // opponent's feedback withheld
    CHECK(update.find("Final Decision") == std::string::npos);  // decision line withheld
}

TEST_CASE("feedback-off round-2 context carries the opponent's text only") {
    const BinaryTask task = true_false_task();
    JotConfig config = scripted_config();
    const DebateTranscript history = two_round_history(config, task);
    config.include_feedback = false;
    const auto request = build_advocate_context(history, task, RoleId::Lawyer, 2, config);
    const std::string& update = request.turns[3].content;
    CHECK(update.find("prosecutor argument round 1") != std::string::npos);
    CHECK(update.find("FBL_token_1") == std::string::npos);
    CHECK(update.find("FBP_token_1") == std::string::npos);
}

TEST_CASE("missing history is reported, not fabricated") {
    const BinaryTask task = true_false_task();
    const JotConfig config = scripted_config();
    DebateTranscript empty;
    CHECK_THROWS_AS(build_advocate_context(empty, task, RoleId::Lawyer, 2, config),
                    MissingHistory);
    CHECK_THROWS_AS(build_judge_context(empty, task, 1, config), MissingHistory);
}

TEST_CASE("judge context holds the task and every advocate utterance so far") {
    const BinaryTask task = true_false_task();
    const JotConfig config = scripted_config();
    const DebateTranscript history = two_round_history(config, task);

    auto round1 = build_judge_context(history, task, 1, config);
    REQUIRE(round1.turns.size() == 4);  // system, task, lawyer(1), prosecutor(1)
    CHECK(round1.turns[1].content == task.input);
    CHECK(round1.turns[2].content.find("lawyer argument round 1") != std::string::npos);
    CHECK(round1.turns[3].content.find("prosecutor argument round 1") != std::string::npos);

    // Full debate: task plus six advocate utterances, in chronological order.
    auto round3 = build_judge_context(history, task, 3, config);
    REQUIRE(round3.turns.size() == 8);
    const std::vector<std::string> expected = {
        "lawyer argument round 1", "prosecutor argument round 1", "lawyer argument round 2",
        "prosecutor argument round 2", "lawyer argument round 3", "prosecutor argument round 3"};
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(round3.turns[i + 2].content.find(expected[i]) != std::string::npos);
    }
    CHECK(round3.tag.key() == "judge:3");
    CHECK(round3.model.name == "script-high");
}

TEST_CASE("a 3-round debate issues exactly nine calls in protocol order") {
    const BinaryTask task = true_false_task();
    const JotConfig config = scripted_config();
    Rig rig(debate_script(3, {"True", "False", "False"}));
    const DebateTranscript transcript = run_debate(task, config, rig.backends);

    const auto entries = rig.ledger->entries();
    REQUIRE(entries.size() == 9);
    const std::vector<std::string> expected_order = {
        "lawyer:1", "prosecutor:1", "judge:1", "lawyer:2", "prosecutor:2",
        "judge:2",  "lawyer:3",     "prosecutor:3", "judge:3"};
    for (std::size_t i = 0; i < expected_order.size(); ++i) {
        CHECK(entries[i].tag.key() == expected_order[i]);
    }
    CHECK(transcript.rulings.size() == 3);
    CHECK(transcript.verdict == transcript.rulings.back().decision);
    CHECK(transcript.verdict == Label::Negative);
    CHECK(validate_transcript(transcript).empty());
}

TEST_CASE("verdict follows the last ruling under the default rule") {
    const BinaryTask task = true_false_task();
    const JotConfig config = scripted_config();
    // Rulings decide Positive, Negative, Negative.
    Rig rig(debate_script(3, {"True", "False", "False"}));
    CHECK(run_debate(task, config, rig.backends).verdict == Label::Negative);
}

TEST_CASE("majority verdict rule outvotes the final ruling") {
    const BinaryTask task = true_false_task();
    JotConfig config = scripted_config();
    config.verdict_rule = VerdictRule::Majority;
    // Decisions Positive, Positive, Negative: majority Positive, last Negative.
    Rig rig(debate_script(3, {"True", "True", "False"}));
    const DebateTranscript transcript = run_debate(task, config, rig.backends);
    CHECK(transcript.verdict == Label::Positive);
    CHECK(validate_transcript(transcript).empty());
}

TEST_CASE("single-round debate degenerates to one exchange and one ruling") {
    const BinaryTask task = true_false_task();
    const JotConfig config = scripted_config(1);
    Rig rig(debate_script(1, {"True"}));
    const DebateTranscript transcript = run_debate(task, config, rig.backends);
    CHECK(rig.ledger->totals().calls == 3);
    CHECK(transcript.rulings.size() == 1);
    CHECK(transcript.verdict == Label::Positive);
}

TEST_CASE("call counts scale as rounds x roles") {
    const BinaryTask task = true_false_task();
    for (int rounds : {1, 3, 5}) {
        JotConfig config = scripted_config(rounds);
        std::vector<std::string> decisions(static_cast<std::size_t>(rounds), "True");
        Rig rig(debate_script(rounds, decisions));
        run_debate(task, config, rig.backends);
        CHECK(rig.ledger->totals().calls == 3 * rounds);
        CHECK(calls_per_debate(config) == 3 * rounds);
    }
}

TEST_CASE("a flat script of nine responses covers one 3-round debate exactly") {
    const BinaryTask task = true_false_task();
    const JotConfig config = scripted_config();
    std::vector<std::string> responses;
    for (int r = 1; r <= 3; ++r) {
        responses.push_back("lawyer flat " + std::to_string(r));
        responses.push_back("prosecutor flat " + std::to_string(r));
        responses.push_back(ruling_text("a", "b", "c", "True"));
    }
    auto ledger = std::make_shared<provider::UsageLedger>();
    auto backend = ScriptedBackend::flat(responses, ledger);
    provider::TierBackends backends{backend, backend};
    CHECK_NOTHROW(run_debate(task, config, backends));
    CHECK(ledger->totals().calls == 9);
    CHECK_THROWS_AS(backend->complete(build_advocate_context({}, task, RoleId::Lawyer, 1, config)),
                    provider::ScriptExhausted);
}

TEST_CASE("removing the prosecutor removes its calls and its voice") {
    const BinaryTask task = true_false_task();
    JotConfig config = scripted_config();
    config.include_prosecutor = false;
    Rig rig(debate_script(3, {"True", "True", "True"}));
    const DebateTranscript transcript = run_debate(task, config, rig.backends);

    CHECK(rig.ledger->calls_for_role("prosecutor") == 0);
    CHECK(rig.ledger->totals().calls == 6);
    for (const auto& utterance : transcript.utterances) {
        CHECK(utterance.role != RoleId::Prosecutor);
    }
    // Judge saw lawyer utterances only.
    for (const auto& request : rig.backend->requests()) {
        if (request.tag.role != "judge") continue;
        for (const auto& turn : request.turns) {
            CHECK(turn.content.find("Prosecutor's argument") == std::string::npos);
        }
    }
    CHECK(validate_transcript(transcript).empty());
}

TEST_CASE("removing the lawyer is symmetric") {
    const BinaryTask task = true_false_task();
    JotConfig config = scripted_config();
    config.include_lawyer = false;
    Rig rig(debate_script(3, {"False", "False", "False"}));
    const DebateTranscript transcript = run_debate(task, config, rig.backends);
    CHECK(rig.ledger->calls_for_role("lawyer") == 0);
    CHECK(rig.ledger->totals().calls == 6);
    CHECK(validate_transcript(transcript).empty());
}

TEST_CASE("with feedback off no advocate request contains ruling feedback text") {
    const BinaryTask task = true_false_task();
    JotConfig config = scripted_config();
    config.include_feedback = false;
    Rig rig(debate_script(3, {"True", "False", "True"}));
    const DebateTranscript transcript = run_debate(task, config, rig.backends);

    std::vector<std::string> feedback_fragments;
    for (const auto& ruling : transcript.rulings) {
        feedback_fragments.push_back(ruling.feedback_to_lawyer);
        feedback_fragments.push_back(ruling.feedback_to_prosecutor);
    }
    for (const auto& request : rig.backend->requests()) {
        if (request.tag.role == "judge") continue;
        for (const auto& turn : request.turns) {
            for (const auto& fragment : feedback_fragments) {
                CHECK(turn.content.find(fragment) == std::string::npos);
            }
        }
    }
}

TEST_CASE("a malformed ruling triggers a corrective re-prompt") {
    const BinaryTask task = true_false_task();
    const JotConfig config = scripted_config(1);
    ScriptedBackend::KeyedScript script = debate_script(1, {"True"});
    script["judge:1"] = {"I rule in favor of the lawyer.",  // no block
                         ruling_text("fixed", "fl", "fp", "True")};
    Rig rig(std::move(script));
    const DebateTranscript transcript = run_debate(task, config, rig.backends);

    CHECK(rig.ledger->calls_for_role("judge") == 2);
    CHECK(transcript.rulings.front().analysis == "fixed");
    // The second judge request quotes the required format after the bad reply.
    const auto requests = rig.backend->requests();
    const auto& retry = requests.back();
    REQUIRE(retry.tag.role == "judge");
    CHECK(retry.turns[retry.turns.size() - 2].speaker == provider::Speaker::Assistant);
    CHECK(retry.turns.back().content.find("####") != std::string::npos);
    CHECK(retry.turns.back().content.find("Final Decision") != std::string::npos);
}

TEST_CASE("persistent malformed rulings end in RulingParseFailure") {
    const BinaryTask task = true_false_task();
    const JotConfig config = scripted_config(1);
    ScriptedBackend::KeyedScript script = debate_script(1, {"True"});
    script["judge:1"] = {"bad", "still bad", "worse"};
    Rig rig(std::move(script));
    CHECK_THROWS_AS(run_debate(task, config, rig.backends), RulingParseFailure);
    CHECK(rig.ledger->calls_for_role("judge") == 3);  // 1 + 2 corrective re-prompts
}

TEST_CASE("config validation names the broken field") {
    JotConfig config = scripted_config();
    config.include_lawyer = false;
    config.include_prosecutor = false;
    CHECK_THROWS_WITH_AS(validate(config), doctest::Contains("include_"), std::invalid_argument);

    config = scripted_config();
    config.rounds = 0;
    CHECK_THROWS_WITH_AS(validate(config), doctest::Contains("rounds"), std::invalid_argument);

    config = scripted_config();
    config.judge_model.tier = provider::ModelTier::Low;
    CHECK_THROWS_WITH_AS(validate(config), doctest::Contains("judge_model"),
                         std::invalid_argument);
}

TEST_CASE("identical scripted runs produce byte-identical transcripts") {
    const BinaryTask task = true_false_task();
    const JotConfig config = scripted_config();
    Rig first(debate_script(3, {"True", "False", "False"}));
    Rig second(debate_script(3, {"True", "False", "False"}));
    const std::string a = transcript_to_string(run_debate(task, config, first.backends));
    const std::string b = transcript_to_string(run_debate(task, config, second.backends));
    CHECK(a == b);
}

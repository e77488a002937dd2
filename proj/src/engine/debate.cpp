#include "jot/engine/debate.hpp"

#include "jot/core/transcript.hpp"
#include "jot/rulings/parser.hpp"

namespace jot::engine {
namespace {

using provider::ChatRequest;
using provider::ChatTurn;
using provider::Speaker;

const Utterance* find_utterance(const DebateTranscript& t, RoleId role, int round) {
    for (const auto& u : t.utterances) {
        if (u.role == role && u.round == round) return &u;
    }
    return nullptr;
}

const JudgeRuling* find_ruling(const DebateTranscript& t, int round) {
    for (const auto& r : t.rulings) {
        if (r.round == round) return &r;
    }
    return nullptr;
}

std::string role_title(RoleId role) {
    switch (role) {
        case RoleId::Lawyer: return "Lawyer";
        case RoleId::Prosecutor: return "Prosecutor";
        case RoleId::Judge: return "Judge";
    }
    throw std::logic_error("invalid RoleId");
}

bool role_included(RoleId role, const JotConfig& config) {
    return role == RoleId::Lawyer ? config.include_lawyer : config.include_prosecutor;
}

std::string corrective_message(const PositionPair& positions) {
    return "Your previous response did not follow the required output format. Respond again "
           "using exactly this format:\n"
           "####\n"
           "Analysis (Reasons for the decision): [Concise logical analysis]\n"
           "Feedback to Lawyer (Reason for win/lose): [Concise feedback to the lawyer]\n"
           "Feedback to Prosecutor (Reason for win/lose): [Concise feedback to the prosecutor]\n"
           "Final Decision: " +
           positions.positive() + "/" + positions.negative() +
           "\n"
           "####";
}

} // namespace

ChatRequest build_advocate_context(const DebateTranscript& transcript, const BinaryTask& task,
                                   RoleId role, int round, const JotConfig& config,
                                   const PromptLibrary& prompts) {
    if (role == RoleId::Judge) {
        throw std::invalid_argument("build_advocate_context takes an advocate role");
    }
    if (!role_included(role, config)) {
        throw std::invalid_argument(to_string(role) + " is ablated in this configuration");
    }
    if (round < 1 || round > config.rounds) throw std::invalid_argument("round out of range");

    const RoleId opponent = role == RoleId::Lawyer ? RoleId::Prosecutor : RoleId::Lawyer;
    ChatRequest request;
    request.model = config.advocate_model;
    request.sampling = config.sampling;
    request.tag = {to_string(role), round};
    request.turns.push_back({Speaker::System, prompts.render(role, task.positions, config.rounds)});
    request.turns.push_back({Speaker::User, task.input});

    for (int r = 1; r < round; ++r) {
        const Utterance* own = find_utterance(transcript, role, r);
        if (!own) {
            throw MissingHistory("missing " + to_string(role) + " utterance for round " +
                                 std::to_string(r));
        }
        request.turns.push_back({Speaker::Assistant, own->content});

        std::string update;
        if (role_included(opponent, config)) {
            const Utterance* theirs = find_utterance(transcript, opponent, r);
            if (!theirs) {
                throw MissingHistory("missing " + to_string(opponent) + " utterance for round " +
                                     std::to_string(r));
            }
            update += role_title(opponent) + "'s argument (round " + std::to_string(r) + "):\n" +
                      theirs->content;
        }
        if (config.include_feedback) {
            const JudgeRuling* ruling = find_ruling(transcript, r);
            if (!ruling) {
                throw MissingHistory("missing ruling for round " + std::to_string(r));
            }
            const std::string& feedback = role == RoleId::Lawyer ? ruling->feedback_to_lawyer
                                                                 : ruling->feedback_to_prosecutor;
            if (!update.empty()) update += "\n\n";
            update += "Judge's feedback to you (round " + std::to_string(r) + "):\n" + feedback;
        }
        if (update.empty()) update = "Proceed with your next utterance.";
        request.turns.push_back({Speaker::User, std::move(update)});
    }
    return request;
}

ChatRequest build_judge_context(const DebateTranscript& transcript, const BinaryTask& task,
                                int round, const JotConfig& config, const PromptLibrary& prompts) {
    if (round < 1 || round > config.rounds) throw std::invalid_argument("round out of range");
    for (RoleId role : {RoleId::Lawyer, RoleId::Prosecutor}) {
        if (role_included(role, config) && !find_utterance(transcript, role, round)) {
            throw MissingHistory("missing " + to_string(role) + " utterance for round " +
                                 std::to_string(round));
        }
    }

    ChatRequest request;
    request.model = config.judge_model;
    request.sampling = config.sampling;
    request.tag = {to_string(RoleId::Judge), round};
    request.turns.push_back(
        {Speaker::System, prompts.render(RoleId::Judge, task.positions, config.rounds)});
    request.turns.push_back({Speaker::User, task.input});
    for (const auto& u : transcript.utterances) {
        if (u.role == RoleId::Judge || u.round > round) continue;
        request.turns.push_back({Speaker::User, role_title(u.role) + "'s argument (round " +
                                                    std::to_string(u.round) + "):\n" + u.content});
    }
    return request;
}

DebateTranscript run_debate(const BinaryTask& task, const JotConfig& config,
                            const provider::TierBackends& backends,
                            const PromptLibrary& prompts) {
    validate(config);
    if (!backends.high || !backends.low) {
        throw std::invalid_argument("both backend tiers must be configured");
    }

    DebateTranscript transcript;
    transcript.task_id = task.id;
    transcript.config_fingerprint = config_fingerprint(config);
    transcript.protocol = "jot";
    transcript.verdict_rule = to_string(config.verdict_rule);
    transcript.positions = task.positions;

    for (int round = 1; round <= config.rounds; ++round) {
        for (RoleId role : {RoleId::Lawyer, RoleId::Prosecutor}) {
            if (!role_included(role, config)) continue;
            ChatRequest request = build_advocate_context(transcript, task, role, round, config,
                                                         prompts);
            std::string content = backends.low->complete(request);
            transcript.utterances.push_back(
                {role, round, std::move(content), provider::request_fingerprint(request)});
        }

        ChatRequest request = build_judge_context(transcript, task, round, config, prompts);
        std::string content;
        std::optional<JudgeRuling> ruling;
        std::string last_reason;
        for (int attempt = 0; attempt <= config.parse_retries; ++attempt) {
            content = backends.high->complete(request);
            try {
                ruling = rulings::parse_ruling(content, task.positions, round);
                break;
            } catch (const rulings::ParseFailure& failure) {
                last_reason = failure.what();
                request.turns.push_back({Speaker::Assistant, content});
                request.turns.push_back({Speaker::User, corrective_message(task.positions)});
            }
        }
        if (!ruling) {
            throw RulingParseFailure("judge output unparseable after " +
                                     std::to_string(1 + config.parse_retries) +
                                     " attempts (round " + std::to_string(round) +
                                     "): " + last_reason);
        }
        transcript.utterances.push_back({RoleId::Judge, round, std::move(content),
                                         provider::request_fingerprint(request)});
        transcript.rulings.push_back(std::move(*ruling));
    }

    transcript.verdict = derive_verdict(transcript.rulings, transcript.verdict_rule);
    return transcript;
}

} // namespace jot::engine

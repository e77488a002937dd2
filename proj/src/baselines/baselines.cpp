#include "jot/baselines/baselines.hpp"

#include <charconv>

#include <json.hpp>

#include "jot/core/normalize.hpp"
#include "jot/core/transcript.hpp"

namespace jot::baselines {
namespace {

using provider::ChatRequest;
using provider::ChatTurn;
using provider::Speaker;

std::string base_system_prompt(const PositionPair& positions) {
    return "You are an expert in logical reasoning. Decide whether the correct answer to the "
           "given input is " +
           positions.positive() + " or " + positions.negative() + ".";
}

std::string answer_instruction(const PositionPair& positions) {
    return "Answer with exactly one of: " + positions.positive() + " or " +
           positions.negative() + ".";
}

std::string cot_instruction(const PositionPair& positions) {
    return "Let's think step by step, then give your final answer on a separate last line in "
           "the form \"Answer: " +
           positions.positive() + "\" or \"Answer: " + positions.negative() + "\".";
}

std::string examples_section(const std::vector<FewShotExample>& bank, bool with_rationale) {
    if (bank.empty()) return "";
    std::string section = "Here are solved examples:\n\n";
    for (const auto& example : bank) {
        section += "Input: " + example.input + "\n";
        if (with_rationale && !example.rationale.empty()) {
            section += "Reasoning: " + example.rationale + "\n";
        }
        section += "Answer: " + example.answer + "\n\n";
    }
    section += "Now solve this input.\n\n";
    return section;
}

ChatRequest answer_request(const BinaryTask& task, const std::vector<FewShotExample>& bank,
                           bool with_rationale, bool cot_cue, const BaselineConfig& config,
                           const provider::CallTag& tag) {
    ChatRequest request;
    request.model = config.debater_model;
    request.sampling = config.sampling;
    request.tag = tag;
    request.turns.push_back({Speaker::System, base_system_prompt(task.positions)});
    request.turns.push_back(
        {Speaker::User, examples_section(bank, with_rationale) + task.input + "\n\n" +
                            (cot_cue ? cot_instruction(task.positions)
                                     : answer_instruction(task.positions))});
    return request;
}

RunRecord make_record(const BinaryTask& task, Method method, Prediction predicted) {
    RunRecord record;
    record.task_id = task.id;
    record.dataset = task.dataset;
    record.method = to_string(method);
    record.predicted = predicted;
    record.gold = task.gold;
    return record;
}

std::string debater_system_prompt(const std::string& assigned) {
    return "You are an expert debater in a structured debate. Argue persuasively that the "
           "correct answer to the given input is " +
           assigned +
           ". Address the judge directly, present clear logical arguments, and rebut the "
           "opposing debater's claims.";
}

void append_double(std::string& out, double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) throw std::logic_error("double formatting failed");
    out.append(buf, ptr);
}

} // namespace

std::string to_string(Method method) {
    switch (method) {
        case Method::ZeroShot: return "zero_shot";
        case Method::FewShot: return "few_shot";
        case Method::CoT: return "cot";
        case Method::SelfConsistency: return "self_consistency";
        case Method::KhanDebate: return "khan_debate";
    }
    throw std::logic_error("invalid Method");
}

Method method_from_string(const std::string& text) {
    if (text == "zero_shot") return Method::ZeroShot;
    if (text == "few_shot") return Method::FewShot;
    if (text == "cot") return Method::CoT;
    if (text == "self_consistency") return Method::SelfConsistency;
    if (text == "khan_debate") return Method::KhanDebate;
    throw std::invalid_argument("unknown method: " + text);
}

void validate(const BaselineConfig& config) {
    if (config.samples < 1) throw std::invalid_argument("samples must be >= 1");
    if (config.method == Method::SelfConsistency && config.samples % 2 == 0) {
        throw std::invalid_argument("samples must be odd for self-consistency");
    }
    if (config.shots < 0) throw std::invalid_argument("shots must be >= 0");
    if (config.rounds < 1) throw std::invalid_argument("rounds must be >= 1");
    if (config.debater_model.name.empty()) {
        throw std::invalid_argument("debater_model.name is empty");
    }
    if (config.method == Method::KhanDebate) {
        if (config.debater_model.tier != provider::ModelTier::High) {
            throw std::invalid_argument("khan-debate debater_model must be tier high");
        }
        if (config.judge_model.tier != provider::ModelTier::Low) {
            throw std::invalid_argument("khan-debate judge_model must be tier low");
        }
        if (config.judge_model.name.empty()) {
            throw std::invalid_argument("judge_model.name is empty");
        }
    }
}

std::string config_fingerprint(const BaselineConfig& config) {
    std::string canonical = to_string(config.method);
    canonical += '\x1e';
    canonical += std::to_string(config.samples);
    canonical += '\x1e';
    canonical += std::to_string(config.shots);
    canonical += '\x1e';
    canonical += std::to_string(config.rounds);
    canonical += '\x1e';
    canonical += config.debater_model.name;
    canonical += '\x1e';
    canonical += config.judge_model.name;
    canonical += '\x1e';
    append_double(canonical, config.sampling.temperature);
    canonical += '\x1e';
    append_double(canonical, config.sampling.top_p);
    if (config.sampling.max_tokens) {
        canonical += '\x1e';
        canonical += std::to_string(*config.sampling.max_tokens);
    }
    return provider::to_hex(provider::fnv1a64(canonical));
}

int calls_per_task(const BaselineConfig& config) {
    switch (config.method) {
        case Method::ZeroShot:
        case Method::FewShot:
        case Method::CoT: return 1;
        case Method::SelfConsistency: return config.samples;
        case Method::KhanDebate: return 2 * config.rounds + 1;
    }
    throw std::logic_error("invalid Method");
}

ChatRequest zero_shot_request(const BinaryTask& task, const BaselineConfig& config) {
    return answer_request(task, {}, false, false, config, {"zero_shot", 1});
}

ChatRequest few_shot_request(const BinaryTask& task, const std::vector<FewShotExample>& bank,
                             const BaselineConfig& config) {
    return answer_request(task, bank, false, false, config, {"few_shot", 1});
}

ChatRequest cot_request(const BinaryTask& task, const std::vector<FewShotExample>& bank,
                        const BaselineConfig& config, int sample_index) {
    return answer_request(task, bank, true, true, config, {"cot", sample_index});
}

std::vector<FewShotExample> generate_fewshot_bank(const std::vector<BinaryTask>& sample_tasks,
                                                  provider::Backend& backend,
                                                  const BaselineConfig& config) {
    std::vector<FewShotExample> bank;
    bank.reserve(sample_tasks.size());
    int index = 0;
    for (const auto& task : sample_tasks) {
        ++index;
        ChatRequest request = answer_request(task, {}, true, true, config,
                                             {"fewshot_bank", index});
        const std::string completion = backend.complete(request);
        const auto answer = find_answer_line(completion, task.positions);
        if (!answer) {
            throw UnsplittableCompletion("no final answer line in bank completion for task " +
                                         task.id);
        }
        // Rationale = everything above the answer line.
        std::string rationale;
        std::size_t line = 0;
        std::size_t start = 0;
        while (line < answer->line_index && start <= completion.size()) {
            std::size_t end = completion.find('\n', start);
            if (end == std::string::npos) break;
            if (!rationale.empty()) rationale += '\n';
            rationale += completion.substr(start, end - start);
            start = end + 1;
            ++line;
        }
        while (!rationale.empty() && (rationale.back() == '\n' || rationale.back() == ' ')) {
            rationale.pop_back();
        }
        bank.push_back({task.input, rationale, task.positions.text_for(answer->label)});
    }
    return bank;
}

std::string bank_to_string(const std::vector<FewShotExample>& bank) {
    nlohmann::json examples = nlohmann::json::array();
    for (const auto& example : bank) {
        examples.push_back({{"input", example.input},
                            {"rationale", example.rationale},
                            {"answer", example.answer}});
    }
    return nlohmann::json{{"examples", examples}}.dump(2) + "\n";
}

void save_bank(const std::vector<FewShotExample>& bank, const std::filesystem::path& path) {
    write_file_atomic(path, bank_to_string(bank));
}

std::vector<FewShotExample> load_bank(const std::filesystem::path& path) {
    const auto doc = nlohmann::json::parse(read_file(path));
    std::vector<FewShotExample> bank;
    for (const auto& item : doc.at("examples")) {
        bank.push_back({item.at("input").get<std::string>(),
                        item.at("rationale").get<std::string>(),
                        item.at("answer").get<std::string>()});
    }
    return bank;
}

RunRecord run_zero_shot(const BinaryTask& task, const BaselineConfig& config,
                        provider::Backend& backend) {
    const std::string output = backend.complete(zero_shot_request(task, config));
    return make_record(task, Method::ZeroShot, normalize_label(output, task.positions));
}

RunRecord run_few_shot(const BinaryTask& task, const BaselineConfig& config,
                       const std::vector<FewShotExample>& bank, provider::Backend& backend) {
    const std::string output = backend.complete(few_shot_request(task, bank, config));
    return make_record(task, Method::FewShot, normalize_label(output, task.positions));
}

RunRecord run_cot(const BinaryTask& task, const BaselineConfig& config,
                  const std::vector<FewShotExample>& bank, provider::Backend& backend) {
    const std::string output = backend.complete(cot_request(task, bank, config));
    return make_record(task, Method::CoT, normalize_label(output, task.positions));
}

Prediction majority_vote(const std::vector<Prediction>& votes) {
    int positive = 0;
    int negative = 0;
    for (const auto& vote : votes) {
        if (!vote) continue;
        (*vote == Label::Positive ? positive : negative) += 1;
    }
    if (positive == negative) return std::nullopt;
    return positive > negative ? Label::Positive : Label::Negative;
}

RunRecord run_self_consistency(const BinaryTask& task, const BaselineConfig& config,
                               const std::vector<FewShotExample>& bank,
                               provider::Backend& backend) {
    validate(config);
    std::vector<Prediction> votes;
    votes.reserve(static_cast<std::size_t>(config.samples));
    for (int sample = 1; sample <= config.samples; ++sample) {
        const std::string output = backend.complete(cot_request(task, bank, config, sample));
        votes.push_back(normalize_label(output, task.positions));
    }
    return make_record(task, Method::SelfConsistency, majority_vote(votes));
}

KhanResult run_khan_debate(const BinaryTask& task, const BaselineConfig& config,
                           const provider::TierBackends& backends) {
    validate(config);
    if (!backends.high || !backends.low) {
        throw std::invalid_argument("both backend tiers must be configured");
    }

    DebateTranscript transcript;
    transcript.task_id = task.id;
    transcript.config_fingerprint = config_fingerprint(config);
    transcript.protocol = "khan";
    transcript.verdict_rule = "last";
    transcript.positions = task.positions;

    // Debater A (recorded as lawyer) argues the positive position, debater B
    // (recorded as prosecutor) the negative; each sees the opponent's prior
    // rounds only and never any judge output.
    struct Side {
        RoleId role;
        std::string tag;
        Label assigned;
    };
    const Side sides[2] = {{RoleId::Lawyer, "debater_a", Label::Positive},
                           {RoleId::Prosecutor, "debater_b", Label::Negative}};

    for (int round = 1; round <= config.rounds; ++round) {
        for (const auto& side : sides) {
            ChatRequest request;
            request.model = config.debater_model;
            request.sampling = config.sampling;
            request.tag = {side.tag, round};
            request.turns.push_back(
                {Speaker::System, debater_system_prompt(task.positions.text_for(side.assigned))});
            request.turns.push_back({Speaker::User, task.input});
            for (int r = 1; r < round; ++r) {
                const Utterance* own = nullptr;
                const Utterance* theirs = nullptr;
                for (const auto& u : transcript.utterances) {
                    if (u.round != r) continue;
                    if (u.role == side.role) {
                        own = &u;
                    } else if (u.role != RoleId::Judge) {
                        theirs = &u;
                    }
                }
                if (!own || !theirs) {
                    throw engine::MissingHistory("missing debater utterance for round " +
                                                 std::to_string(r));
                }
                request.turns.push_back({Speaker::Assistant, own->content});
                request.turns.push_back({Speaker::User, "Opposing debater's argument (round " +
                                                            std::to_string(r) + "):\n" +
                                                            theirs->content});
            }
            std::string content = backends.high->complete(request);
            transcript.utterances.push_back({side.role, round, std::move(content),
                                             provider::request_fingerprint(request)});
        }
    }

    // The judge reads the full exchange once.
    ChatRequest judge_request;
    judge_request.model = config.judge_model;
    judge_request.sampling = config.sampling;
    judge_request.tag = {"judge", config.rounds};
    judge_request.turns.push_back(
        {Speaker::System,
         "You are the judge of a debate between two experts. One argued that the correct answer "
         "to the given input is " +
             task.positions.positive() + "; the other argued for " + task.positions.negative() +
             ". Weigh the arguments and decide which answer is correct. There can be no tie. "
             "Reply with exactly one of: " +
             task.positions.positive() + " or " + task.positions.negative() + "."});
    judge_request.turns.push_back({Speaker::User, task.input});
    for (const auto& u : transcript.utterances) {
        const Label assigned = u.role == RoleId::Lawyer ? Label::Positive : Label::Negative;
        judge_request.turns.push_back(
            {Speaker::User, "Debater arguing " + task.positions.text_for(assigned) + " (round " +
                                std::to_string(u.round) + "):\n" + u.content});
    }
    std::string judge_output = backends.low->complete(judge_request);
    const Prediction decision = normalize_label(judge_output, task.positions);
    if (!decision) {
        throw engine::RulingParseFailure("khan judge decision matches neither position");
    }

    transcript.utterances.push_back({RoleId::Judge, config.rounds, judge_output,
                                     provider::request_fingerprint(judge_request)});
    JudgeRuling ruling;
    ruling.round = config.rounds;
    ruling.analysis = judge_output;
    ruling.decision = *decision;
    ruling.raw = std::move(judge_output);
    transcript.rulings.push_back(std::move(ruling));
    transcript.verdict = *decision;

    KhanResult result{make_record(task, Method::KhanDebate, decision), std::move(transcript)};
    return result;
}

} // namespace jot::baselines

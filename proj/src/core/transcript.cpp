#include "jot/core/transcript.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace jot {
namespace {

using nlohmann::json;

json utterance_to_json(const Utterance& u) {
    return json{{"role", to_string(u.role)},
                {"round", u.round},
                {"content", u.content},
                {"request_fingerprint", u.request_fingerprint}};
}

Utterance utterance_from_json(const json& doc) {
    Utterance u;
    u.role = role_from_string(doc.at("role").get<std::string>());
    u.round = doc.at("round").get<int>();
    u.content = doc.at("content").get<std::string>();
    u.request_fingerprint = doc.at("request_fingerprint").get<std::string>();
    return u;
}

json ruling_to_json(const JudgeRuling& r) {
    return json{{"round", r.round},
                {"analysis", r.analysis},
                {"feedback_to_lawyer", r.feedback_to_lawyer},
                {"feedback_to_prosecutor", r.feedback_to_prosecutor},
                {"decision", to_string(r.decision)},
                {"raw", r.raw}};
}

JudgeRuling ruling_from_json(const json& doc) {
    JudgeRuling r;
    r.round = doc.at("round").get<int>();
    r.analysis = doc.at("analysis").get<std::string>();
    r.feedback_to_lawyer = doc.at("feedback_to_lawyer").get<std::string>();
    r.feedback_to_prosecutor = doc.at("feedback_to_prosecutor").get<std::string>();
    r.decision = label_from_string(doc.at("decision").get<std::string>());
    r.raw = doc.at("raw").get<std::string>();
    return r;
}

int role_rank(RoleId role) {
    switch (role) {
        case RoleId::Lawyer: return 0;
        case RoleId::Prosecutor: return 1;
        case RoleId::Judge: return 2;
    }
    return 3;
}

} // namespace

json transcript_to_json(const DebateTranscript& t) {
    json utterances = json::array();
    for (const auto& u : t.utterances) utterances.push_back(utterance_to_json(u));
    json rulings = json::array();
    for (const auto& r : t.rulings) rulings.push_back(ruling_to_json(r));
    json doc{{"task_id", t.task_id},
             {"config_fingerprint", t.config_fingerprint},
             {"protocol", t.protocol},
             {"verdict_rule", t.verdict_rule},
             {"utterances", utterances},
             {"rulings", rulings},
             {"verdict", to_string(t.verdict)}};
    if (t.positions) {
        doc["positions"] = {{"positive", t.positions->positive()},
                            {"negative", t.positions->negative()}};
    }
    return doc;
}

DebateTranscript transcript_from_json(const json& doc) {
    DebateTranscript t;
    t.task_id = doc.at("task_id").get<std::string>();
    t.config_fingerprint = doc.at("config_fingerprint").get<std::string>();
    t.protocol = doc.value("protocol", "jot");
    t.verdict_rule = doc.value("verdict_rule", "last");
    if (doc.contains("positions")) {
        t.positions.emplace(doc["positions"].at("positive").get<std::string>(),
                            doc["positions"].at("negative").get<std::string>());
    }
    for (const auto& u : doc.at("utterances")) t.utterances.push_back(utterance_from_json(u));
    for (const auto& r : doc.at("rulings")) t.rulings.push_back(ruling_from_json(r));
    t.verdict = label_from_string(doc.at("verdict").get<std::string>());
    return t;
}

std::string transcript_to_string(const DebateTranscript& t) {
    return transcript_to_json(t).dump(2) + "\n";
}

void save_transcript(const DebateTranscript& t, const std::filesystem::path& path) {
    write_file_atomic(path, transcript_to_string(t));
}

DebateTranscript load_transcript(const std::filesystem::path& path) {
    return transcript_from_json(json::parse(read_file(path)));
}

Label derive_verdict(const std::vector<JudgeRuling>& rulings, const std::string& verdict_rule) {
    if (rulings.empty()) throw std::invalid_argument("cannot derive a verdict from zero rulings");
    if (verdict_rule == "last") return rulings.back().decision;
    if (verdict_rule == "majority") {
        int positive = 0;
        for (const auto& r : rulings) {
            if (r.decision == Label::Positive) ++positive;
        }
        const int negative = static_cast<int>(rulings.size()) - positive;
        if (positive == negative) return rulings.back().decision;
        return positive > negative ? Label::Positive : Label::Negative;
    }
    throw std::invalid_argument("unknown verdict rule: " + verdict_rule);
}

std::vector<std::string> validate_transcript(const DebateTranscript& t) {
    std::vector<std::string> errors;
    auto fail = [&errors](std::string message) { errors.push_back(std::move(message)); };

    if (t.task_id.empty()) fail("task_id is empty");
    if (t.protocol != "jot" && t.protocol != "khan") fail("unknown protocol: " + t.protocol);
    if (t.verdict_rule != "last" && t.verdict_rule != "majority") {
        fail("unknown verdict_rule: " + t.verdict_rule);
    }
    if (t.utterances.empty()) fail("transcript has no utterances");

    // Ordering: rounds are contiguous from 1; within a round roles appear in
    // lawyer < prosecutor < judge order; no (role, round) repeats.
    int max_round = 0;
    std::set<std::pair<int, int>> seen;
    {
        int prev_round = 1;
        int prev_rank = -1;
        bool first = true;
        for (const auto& u : t.utterances) {
            if (u.content.empty()) {
                fail("empty utterance content (" + to_string(u.role) + ", round " +
                     std::to_string(u.round) + ")");
            }
            if (u.round < 1) fail("utterance round < 1");
            if (first && u.round != 1) fail("first utterance is not in round 1");
            if (!first) {
                if (u.round < prev_round) {
                    fail("utterance rounds decrease at round " + std::to_string(u.round));
                } else if (u.round == prev_round && role_rank(u.role) <= prev_rank) {
                    fail("role order violated in round " + std::to_string(u.round) + ": " +
                         to_string(u.role) + " out of sequence");
                } else if (u.round > prev_round + 1) {
                    fail("round " + std::to_string(prev_round + 1) + " missing");
                }
            }
            if (!seen.insert({u.round, role_rank(u.role)}).second) {
                fail("duplicate utterance (" + to_string(u.role) + ", round " +
                     std::to_string(u.round) + ")");
            }
            prev_rank = role_rank(u.role);
            prev_round = u.round;
            max_round = std::max(max_round, u.round);
            first = false;
        }
    }

    // Advocate participation must be uniform across rounds.
    std::map<int, std::set<RoleId>> advocates_by_round;
    std::vector<int> judge_rounds;
    for (const auto& u : t.utterances) {
        if (u.role == RoleId::Judge) {
            judge_rounds.push_back(u.round);
        } else {
            advocates_by_round[u.round].insert(u.role);
        }
    }
    if (!advocates_by_round.empty()) {
        const auto& reference = advocates_by_round.begin()->second;
        if (reference.empty()) fail("round without any advocate utterance");
        for (int round = 1; round <= max_round; ++round) {
            if (advocates_by_round[round] != reference) {
                fail("advocate set differs in round " + std::to_string(round));
            }
        }
    } else {
        fail("transcript has no advocate utterances");
    }

    if (t.protocol == "jot") {
        if (static_cast<int>(judge_rounds.size()) != max_round) {
            fail("expected one judge utterance per round, found " +
                 std::to_string(judge_rounds.size()) + " for " + std::to_string(max_round) +
                 " rounds");
        }
    } else { // khan: the judge reads the exchange once at the end
        if (judge_rounds.size() != 1 || (max_round > 0 && judge_rounds.front() != max_round)) {
            fail("khan transcript must contain exactly one final-round judge utterance");
        }
    }

    if (t.rulings.size() != judge_rounds.size()) {
        fail("rulings count (" + std::to_string(t.rulings.size()) +
             ") != judge utterance count (" + std::to_string(judge_rounds.size()) + ")");
    } else {
        for (std::size_t i = 0; i < t.rulings.size(); ++i) {
            if (t.rulings[i].round != judge_rounds[i]) {
                fail("ruling round " + std::to_string(t.rulings[i].round) +
                     " does not match judge utterance round " + std::to_string(judge_rounds[i]));
            }
            if (t.rulings[i].raw.empty()) {
                fail("ruling " + std::to_string(i) + " has empty raw text");
            }
        }
    }

    if (t.rulings.empty()) {
        fail("transcript has no rulings to derive a verdict from");
    } else if (t.verdict_rule == "last" || t.verdict_rule == "majority") {
        if (t.verdict != derive_verdict(t.rulings, t.verdict_rule)) {
            fail("verdict does not equal the " + t.verdict_rule + "-rule decision of the rulings");
        }
    }

    return errors;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for write: " + tmp);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace jot

#include "jot/engine/prompts.hpp"

#include <array>
#include <stdexcept>

#include "jot/core/transcript.hpp"

namespace jot::engine {
namespace {

constexpr const char* kLawyerPrompt =
    R"(Role: You are an expert lawyer specialized in logical reasoning. Your task is to argue persuasively that the correct answer to the given input is {positive}. You will address the judge directly and present logical arguments and evidence.

Procedure: You have a total of {rounds} opportunities to speak, each with a clear purpose:
1. First utterance: Briefly analyze the input, describe its key logical characteristics, and outline your main arguments supporting a {positive} response.
2. Second utterance: Logically counter the prosecutor's arguments, clearly addressing any concerns or questions raised by the judge. Reinforce your arguments with logical precision.
3. Final utterance: Concisely summarize the strongest logical points, reiterate how you've effectively countered the prosecution, and firmly establish why the answer must be {positive}.

Style: Be concise, highly structured, and persuasive. Clearly address all potential doubts raised by the prosecutor or judge.
)";

constexpr const char* kProsecutorPrompt =
    R"(Role: You are an expert prosecutor specialized in logical reasoning. Your task is to argue persuasively that the correct answer to the given input is {negative}. You will address the judge directly and present logical arguments and evidence.

Procedure: You have a total of {rounds} opportunities to speak, each with a clear purpose:
1. First utterance: Briefly analyze the input, describe its key logical characteristics, and outline your main arguments supporting a {negative} response.
2. Second utterance: Logically counter the lawyer's arguments, clearly addressing any concerns or questions raised by the judge. Reinforce your arguments with logical precision.
3. Final utterance: Concisely summarize the strongest logical points, reiterate how you've effectively countered the lawyer's arguments, and firmly establish why the answer must be {negative}.

Style: Be concise, highly structured, and persuasive. Clearly address all potential doubts raised by the lawyer or judge.
)";

constexpr const char* kJudgePrompt =
    R"(Role: You are an expert judge specialized in logical reasoning. Your task is to carefully analyze the given input and the logical arguments provided by both a lawyer (arguing for {positive}) and a prosecutor (arguing for {negative}, then decisively determine whether the correct answer is {positive} or {negative}.
Important: You must remain strictly neutral, unbiased, and objective. Base your decision solely on logical strength and coherence of the presented arguments, disregarding personal beliefs or external biases.
Procedure: You will issue {rounds} judgments in total. For each judgment, you must:
1. Analyze the input thoroughly along with the arguments presented by both the lawyer and the prosecutor.
2. Evaluate which argument is more logically convincing. There can be NO TIE; you must choose either {positive} or {negative}.

Requirements:
Clearly provide feedback to both the lawyer and the prosecutor explaining why their arguments were convincing or lacking, structured in a concise, logical manner.
Output Format (delimited by ####):
####
Analysis (Reasons for the decision): [Concise logical analysis]
Feedback to Lawyer (Reason for win/lose): [Concise feedback to the lawyer]
Feedback to Prosecutor (Reason for win/lose): [Concise feedback to the prosecutor]
Final Decision: {positive}/{negative}
####
)";

void replace_all(std::string& text, std::string_view slot, const std::string& value) {
    std::size_t at = 0;
    while ((at = text.find(slot, at)) != std::string::npos) {
        text.replace(at, slot.size(), value);
        at += value.size();
    }
}

} // namespace

PromptLibrary::PromptLibrary(std::string lawyer, std::string prosecutor, std::string judge)
    : lawyer_(std::move(lawyer)), prosecutor_(std::move(prosecutor)), judge_(std::move(judge)) {
    if (lawyer_.empty() || prosecutor_.empty() || judge_.empty()) {
        throw std::invalid_argument("prompt templates must be non-empty");
    }
}

const PromptLibrary& PromptLibrary::builtin() {
    static const PromptLibrary library(kLawyerPrompt, kProsecutorPrompt, kJudgePrompt);
    return library;
}

PromptLibrary PromptLibrary::from_directory(const std::filesystem::path& dir) {
    return PromptLibrary(read_file(dir / "lawyer.txt"), read_file(dir / "prosecutor.txt"),
                         read_file(dir / "judge.txt"));
}

const std::string& PromptLibrary::raw(RoleId role) const {
    switch (role) {
        case RoleId::Lawyer: return lawyer_;
        case RoleId::Prosecutor: return prosecutor_;
        case RoleId::Judge: return judge_;
    }
    throw std::logic_error("invalid RoleId");
}

std::string PromptLibrary::render(RoleId role, const PositionPair& positions, int rounds) const {
    if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
    std::string text = raw(role);
    replace_all(text, "{positive}", positions.positive());
    replace_all(text, "{negative}", positions.negative());
    replace_all(text, "{rounds}", std::to_string(rounds));

    static constexpr std::array<std::string_view, 5> kForbidden = {
        "{positive}", "{negative}", "{rounds}", "<Positive Position>", "<Negative Position>"};
    for (std::string_view leftover : kForbidden) {
        if (text.find(leftover) != std::string::npos) {
            throw std::logic_error("unresolved placeholder in rendered prompt: " +
                                   std::string(leftover));
        }
    }
    return text;
}

std::string render_role_prompt(RoleId role, const PositionPair& positions, int rounds) {
    return PromptLibrary::builtin().render(role, positions, rounds);
}

} // namespace jot::engine

#pragma once

#include <stdexcept>

#include "jot/core/types.hpp"
#include "jot/engine/config.hpp"
#include "jot/engine/prompts.hpp"
#include "jot/provider/backend.hpp"

namespace jot::engine {

/// A context builder was asked for a round whose prerequisites are not in
/// the transcript yet.
class MissingHistory : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The judge failed to produce a parseable ruling after every corrective
/// re-prompt; the task is recorded Unparseable by the caller.
class RulingParseFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Builds the request for an advocate's next utterance. The System turn is
/// the rendered role prompt; User turns carry the task input and, per prior
/// round, the opponent's utterance plus (iff feedback is on) the judge's
/// feedback addressed to this role — never the opponent's feedback, never
/// the decision. Prior own utterances are replayed as Assistant turns.
provider::ChatRequest build_advocate_context(const DebateTranscript& transcript,
                                             const BinaryTask& task, RoleId role, int round,
                                             const JotConfig& config,
                                             const PromptLibrary& prompts = PromptLibrary::builtin());

/// Builds the judge's request: rendered judge prompt, the task input, and
/// every advocate utterance up to and including `round` in order.
provider::ChatRequest build_judge_context(const DebateTranscript& transcript,
                                          const BinaryTask& task, int round,
                                          const JotConfig& config,
                                          const PromptLibrary& prompts = PromptLibrary::builtin());

/// Runs the full iterative protocol: per round, lawyer then prosecutor (as
/// included) then judge; parses each judge output into a ruling; derives the
/// verdict. The returned transcript satisfies every transcript invariant.
DebateTranscript run_debate(const BinaryTask& task, const JotConfig& config,
                            const provider::TierBackends& backends,
                            const PromptLibrary& prompts = PromptLibrary::builtin());

} // namespace jot::engine

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "jot/core/types.hpp"
#include "jot/engine/debate.hpp"
#include "jot/provider/backend.hpp"

namespace jot::baselines {

enum class Method { ZeroShot, FewShot, CoT, SelfConsistency, KhanDebate };

std::string to_string(Method method);
Method method_from_string(const std::string& text);

/// One worked example for the shared few-shot bank. The rationale comes from
/// a zero-shot chain-of-thought completion and may be empty.
struct FewShotExample {
    std::string input;
    std::string rationale;
    std::string answer;

    friend bool operator==(const FewShotExample&, const FewShotExample&) = default;
};

struct BaselineConfig {
    Method method = Method::ZeroShot;
    int samples = 3;  // self-consistency vote size; kept odd
    int shots = 3;    // few-shot bank size
    int rounds = 3;   // khan-debate rounds
    provider::ModelRef debater_model{provider::ModelTier::Low, "",
                                     provider::ProviderKind::Scripted};
    provider::ModelRef judge_model{provider::ModelTier::Low, "", provider::ProviderKind::Scripted};
    provider::SamplingParams sampling;
};

/// Throws std::invalid_argument naming the offending field. Khan-debate
/// inverts JoT's tiers: debaters high, judge low.
void validate(const BaselineConfig& config);

std::string config_fingerprint(const BaselineConfig& config);

/// Provider calls one task evaluation will issue under this method.
int calls_per_task(const BaselineConfig& config);

/// A bank-generation completion with no recognizable final answer line.
class UnsplittableCompletion : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Request builders, exposed so tests can inspect exact prompt shapes.
provider::ChatRequest zero_shot_request(const BinaryTask& task, const BaselineConfig& config);
provider::ChatRequest few_shot_request(const BinaryTask& task,
                                       const std::vector<FewShotExample>& bank,
                                       const BaselineConfig& config);
provider::ChatRequest cot_request(const BinaryTask& task, const std::vector<FewShotExample>& bank,
                                  const BaselineConfig& config, int sample_index = 1);

/// One zero-shot CoT completion per sample task, split into rationale and
/// final answer. The same bank is reused verbatim by FewShot, CoT, and
/// SelfConsistency.
std::vector<FewShotExample> generate_fewshot_bank(const std::vector<BinaryTask>& sample_tasks,
                                                  provider::Backend& backend,
                                                  const BaselineConfig& config);

std::string bank_to_string(const std::vector<FewShotExample>& bank);
void save_bank(const std::vector<FewShotExample>& bank, const std::filesystem::path& path);
std::vector<FewShotExample> load_bank(const std::filesystem::path& path);

RunRecord run_zero_shot(const BinaryTask& task, const BaselineConfig& config,
                        provider::Backend& backend);
RunRecord run_few_shot(const BinaryTask& task, const BaselineConfig& config,
                       const std::vector<FewShotExample>& bank, provider::Backend& backend);
RunRecord run_cot(const BinaryTask& task, const BaselineConfig& config,
                  const std::vector<FewShotExample>& bank, provider::Backend& backend);

/// Majority label over the valid votes; unparseable samples are excluded.
/// An empty or tied valid vote set yields an unparseable prediction.
Prediction majority_vote(const std::vector<Prediction>& votes);

RunRecord run_self_consistency(const BinaryTask& task, const BaselineConfig& config,
                               const std::vector<FewShotExample>& bank,
                               provider::Backend& backend);

/// Symmetric two-debater protocol: high-tier debaters with opposing assigned
/// answers alternate for `rounds` rounds; the low-tier judge reads the whole
/// exchange once and answers with a bare decision.
struct KhanResult {
    RunRecord record;
    DebateTranscript transcript;
};
KhanResult run_khan_debate(const BinaryTask& task, const BaselineConfig& config,
                           const provider::TierBackends& backends);

} // namespace jot::baselines

#pragma once

#include <filesystem>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "jot/core/types.hpp"
#include "jot/provider/scripted.hpp"

namespace jot::test {

class TempDir {
public:
    TempDir() {
        const auto base = std::filesystem::temp_directory_path();
        std::mt19937_64 rng(std::random_device{}());
        for (int attempt = 0; attempt < 64; ++attempt) {
            auto candidate = base / ("jot-test-" + std::to_string(rng()));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("cannot create temp directory");
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline BinaryTask true_false_task(std::string id = "task-1",
                                  std::string input = "not ( True ) and ( True ) is",
                                  Label gold = Label::Negative) {
    return BinaryTask{std::move(id), "boolean_expressions", std::move(input),
                      PositionPair("True", "False"), gold};
}

inline std::string ruling_text(const std::string& analysis, const std::string& to_lawyer,
                               const std::string& to_prosecutor, const std::string& decision) {
    return "####\nAnalysis (Reasons for the decision): " + analysis +
           "\nFeedback to Lawyer (Reason for win/lose): " + to_lawyer +
           "\nFeedback to Prosecutor (Reason for win/lose): " + to_prosecutor +
           "\nFinal Decision: " + decision + "\n####\n";
}

/// Keyed script covering one full JoT debate; decisions[r-1] is the judge's
/// round-r decision text. Feedback strings carry distinctive per-round tokens
/// so information-flow checks can look for leaked substrings.
inline provider::ScriptedBackend::KeyedScript debate_script(
    int rounds, const std::vector<std::string>& decisions) {
    provider::ScriptedBackend::KeyedScript script;
    for (int r = 1; r <= rounds; ++r) {
        const std::string n = std::to_string(r);
        script["lawyer:" + n] = {"lawyer argument round " + n};
        script["prosecutor:" + n] = {"prosecutor argument round " + n};
        script["judge:" + n] = {ruling_text("analysis round " + n, "FBL_token_" + n,
                                            "FBP_token_" + n, decisions[static_cast<std::size_t>(r - 1)])};
    }
    return script;
}

inline std::filesystem::path data_dir() {
#ifdef JOT_TEST_DATA_DIR
    return std::filesystem::path(JOT_TEST_DATA_DIR);
#else
    return std::filesystem::path("tests/data");
#endif
}

} // namespace jot::test

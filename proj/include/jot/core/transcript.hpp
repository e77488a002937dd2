#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "jot/core/types.hpp"

namespace jot {

nlohmann::json transcript_to_json(const DebateTranscript& transcript);
DebateTranscript transcript_from_json(const nlohmann::json& doc);

/// Canonical serialization: 2-space indent, sorted keys, trailing newline.
/// Identical transcripts serialize to identical bytes on every platform.
std::string transcript_to_string(const DebateTranscript& transcript);

void save_transcript(const DebateTranscript& transcript, const std::filesystem::path& path);
DebateTranscript load_transcript(const std::filesystem::path& path);

/// Derives the verdict from the ruling sequence under the given rule.
/// "last" takes the final ruling's decision; "majority" takes the majority
/// decision, breaking even-split ties toward the final ruling.
Label derive_verdict(const std::vector<JudgeRuling>& rulings, const std::string& verdict_rule);

/// Checks every structural transcript invariant and returns one message per
/// violation (empty means valid). Works on any stored transcript without
/// access to the config that produced it.
std::vector<std::string> validate_transcript(const DebateTranscript& transcript);

/// Writes `content` to `path` via a temp file + rename so concurrent readers
/// never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

} // namespace jot

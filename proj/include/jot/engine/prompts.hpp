#pragma once

#include <filesystem>
#include <string>

#include "jot/core/types.hpp"

namespace jot::engine {

/// Role system prompts with `{positive}`, `{negative}`, `{rounds}`
/// substitution slots. The built-in set ships verbatim in `prompts/`; a
/// directory of lawyer.txt / prosecutor.txt / judge.txt overrides it.
class PromptLibrary {
public:
    static const PromptLibrary& builtin();
    static PromptLibrary from_directory(const std::filesystem::path& dir);

    /// Substitutes every slot; throws std::logic_error if any slot or
    /// angle-bracket position placeholder survives.
    std::string render(RoleId role, const PositionPair& positions, int rounds) const;

    const std::string& raw(RoleId role) const;

private:
    PromptLibrary(std::string lawyer, std::string prosecutor, std::string judge);

    std::string lawyer_;
    std::string prosecutor_;
    std::string judge_;
};

/// Renders from the built-in library.
std::string render_role_prompt(RoleId role, const PositionPair& positions, int rounds);

} // namespace jot::engine

#pragma once
// Blocked-term filter applied to participant posts before anything is stored.

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ibis {

struct ModerationRule {
    std::vector<std::string> blocked_terms;

    /// One term per line; blank lines and lines starting with '#' are skipped.
    static ModerationRule read(std::istream& in);
    static ModerationRule load(const std::filesystem::path& path);
};

/// Returns the first blocked term (in list order) that occurs in `text` as
/// whole words, ignoring ASCII case; nullopt when the text passes.
std::optional<std::string> moderate(std::string_view text, const ModerationRule& rule);

}  // namespace ibis

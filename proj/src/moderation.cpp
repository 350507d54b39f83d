#include "ibis/moderation.hpp"

#include "ibis/error.hpp"
#include "ibis/text.hpp"

#include <cctype>
#include <fstream>

namespace ibis {

namespace {

// Bytes of multi-byte UTF-8 sequences count as word characters so a term
// never matches inside a non-ASCII word.
bool is_word_byte(char c) noexcept
{
    const auto u = static_cast<unsigned char>(c);
    return u >= 0x80 || std::isalnum(u) != 0 || c == '_';
}

bool occurs_as_words(std::string_view haystack, std::string_view term) noexcept
{
    for (std::size_t pos = haystack.find(term); pos != std::string_view::npos; pos = haystack.find(term, pos + 1)) {
        const bool left = pos == 0 || !is_word_byte(haystack[pos - 1]) || !is_word_byte(term.front());
        const std::size_t end = pos + term.size();
        const bool right = end == haystack.size() || !is_word_byte(haystack[end]) || !is_word_byte(term.back());
        if (left && right) return true;
    }
    return false;
}

}  // namespace

ModerationRule ModerationRule::read(std::istream& in)
{
    ModerationRule rule;
    std::string line;
    while (std::getline(in, line)) {
        const auto term = text::trim(line);
        if (term.empty() || term.front() == '#') continue;
        rule.blocked_terms.emplace_back(term);
    }
    return rule;
}

ModerationRule ModerationRule::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::StorageFailure, "cannot open wordlist " + path.string());
    return read(in);
}

std::optional<std::string> moderate(std::string_view text, const ModerationRule& rule)
{
    if (rule.blocked_terms.empty()) return std::nullopt;
    const std::string lowered = text::to_lower(text);
    for (const std::string& term : rule.blocked_terms) {
        const std::string needle = text::to_lower(text::trim(term));
        if (!needle.empty() && occurs_as_words(lowered, needle)) return term;
    }
    return std::nullopt;
}

}  // namespace ibis

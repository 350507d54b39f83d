#include "ibis/text.hpp"

#include <algorithm>

namespace ibis::text {

bool is_space(char c) noexcept
{
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string_view trim(std::string_view s) noexcept
{
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

bool is_blank(std::string_view s) noexcept { return trim(s).empty(); }

std::string to_lower(std::string_view s)
{
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

namespace {

bool is_word_char(char c) noexcept
{
    auto u = static_cast<unsigned char>(c);
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '\'' || u >= 0x80;
}

}  // namespace

std::vector<std::string> words(std::string_view s)
{
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && !is_word_char(s[i])) ++i;
        std::size_t start = i;
        while (i < s.size() && is_word_char(s[i])) ++i;
        if (i > start) {
            std::string_view w = s.substr(start, i - start);
            // Quotes used as punctuation ('like this') are not part of the word.
            while (!w.empty() && w.front() == '\'') w.remove_prefix(1);
            while (!w.empty() && w.back() == '\'') w.remove_suffix(1);
            if (!w.empty()) out.push_back(to_lower(w));
        }
    }
    return out;
}

bool contains_phrase(const std::vector<std::string>& tokens,
                     const std::vector<std::string>& phrase) noexcept
{
    if (phrase.empty() || phrase.size() > tokens.size()) return false;
    return std::search(tokens.begin(), tokens.end(), phrase.begin(), phrase.end()) != tokens.end();
}

bool starts_with_phrase(const std::vector<std::string>& tokens,
                        const std::vector<std::string>& phrase) noexcept
{
    if (phrase.empty() || phrase.size() > tokens.size()) return false;
    return std::equal(phrase.begin(), phrase.end(), tokens.begin());
}

std::size_t utf8_length(std::string_view s) noexcept
{
    return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) {
        return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
    }));
}

std::size_t utf8_offset(std::string_view s, std::size_t n) noexcept
{
    std::size_t seen = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) {
            if (seen == n) return i;
            ++seen;
        }
    }
    return s.size();
}

}  // namespace ibis::text

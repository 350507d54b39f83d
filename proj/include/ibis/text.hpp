#pragma once
// Small ASCII-oriented string helpers shared by the text-handling modules.

#include <string>
#include <string_view>
#include <vector>

namespace ibis::text {

bool is_space(char c) noexcept;
std::string_view trim(std::string_view s) noexcept;
bool is_blank(std::string_view s) noexcept;
std::string to_lower(std::string_view s);

/// Lowercased word tokens: runs of alphanumerics and apostrophes. Non-ASCII
/// bytes are treated as word characters so UTF-8 words stay whole.
std::vector<std::string> words(std::string_view s);

/// True if `phrase` (already split into lowercase words) occurs as a
/// contiguous run in `tokens`.
bool contains_phrase(const std::vector<std::string>& tokens,
                     const std::vector<std::string>& phrase) noexcept;
bool starts_with_phrase(const std::vector<std::string>& tokens,
                        const std::vector<std::string>& phrase) noexcept;

/// Number of UTF-8 code points.
std::size_t utf8_length(std::string_view s) noexcept;
/// Byte offset of the code point at index `n` (or s.size()).
std::size_t utf8_offset(std::string_view s, std::size_t n) noexcept;

}  // namespace ibis::text

#pragma once

#include <cstddef>
#include <string>
#include <string_view>

// Small UTF-8 layer. Everything user-visible in this library is measured in
// codepoints, never bytes: the scripts we target are multi-byte in UTF-8 and
// slicing bytes would tear characters apart.
namespace morphtag::uni {

/// Decodes UTF-8; malformed bytes become U+FFFD (one replacement per bad byte).
std::u32string decode_utf8(std::string_view text);

std::string encode_utf8(std::u32string_view text);
std::string encode_utf8(char32_t cp);

/// Number of codepoints in a UTF-8 string.
std::size_t length(std::string_view text);

/// ASCII whitespace plus NBSP.
bool is_space(char32_t cp);

/// Decimal digits: ASCII, Devanagari, Bengali and Meetei Mayek ranges.
bool is_digit(char32_t cp);

/// Punctuation / symbol class: ASCII punctuation, danda marks, currency
/// signs and common general-punctuation codepoints.
bool is_symbol(char32_t cp);

}  // namespace morphtag::uni

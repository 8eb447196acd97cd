#pragma once

// UTF-8 helpers. All offsets exposed by the library count Unicode scalar
// values, never bytes or UTF-16 code units.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace geobench::unicode {

bool is_valid_utf8(std::string_view text);

/// Throws DataError on ill-formed UTF-8.
std::u32string decode(std::string_view text);
std::string encode(std::u32string_view scalars);

std::size_t scalar_length(std::string_view text);

/// Substring [start, end) in scalar offsets. Requires start <= end <= length.
std::string slice(std::u32string_view scalars, std::size_t start, std::size_t end);

/// Full lowercase mapping of one scalar, or the scalar itself when the
/// mapping would not be exactly one scalar long.
char32_t lowercase_scalar(char32_t c);

/// Lowercases per scalar; the scalar length of the result always equals the input's.
std::string lowercase_preserving_length(std::string_view text);

/// Full Unicode case folding (may change length, e.g. "ß" -> "ss").
std::string case_fold(std::string_view text);

/// Canonical decomposition, removal of nonspacing marks, recomposition.
std::string strip_diacritics(std::string_view text);

bool is_whitespace(char32_t c);
bool is_uppercase(char32_t c);

struct WordToken {
  std::size_t start = 0;  // scalar offset, inclusive
  std::size_t end = 0;    // scalar offset, exclusive
};

/// Word tokens per the Unicode word-boundary rules. Segments made only of
/// whitespace or punctuation are not returned.
std::vector<WordToken> word_tokens(std::u32string_view text);

}  // namespace geobench::unicode

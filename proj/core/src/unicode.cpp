#include "geobench/unicode.hpp"

#include <unicode/brkiter.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/ustring.h>
#include <unicode/utf8.h>

#include <memory>

#include "geobench/errors.hpp"

namespace geobench::unicode {

namespace {

icu::UnicodeString to_icu(std::u32string_view scalars) {
  return icu::UnicodeString::fromUTF32(reinterpret_cast<const UChar32*>(scalars.data()),
                                       static_cast<int32_t>(scalars.size()));
}

std::string to_utf8(const icu::UnicodeString& s) {
  std::string out;
  s.toUTF8String(out);
  return out;
}

void append_utf8(std::string& out, char32_t c) {
  char buf[4];
  int32_t i = 0;
  UBool error = false;
  U8_APPEND(reinterpret_cast<uint8_t*>(buf), i, 4, static_cast<UChar32>(c), error);
  if (error) throw DataError("cannot encode scalar as UTF-8");
  out.append(buf, static_cast<std::size_t>(i));
}

}  // namespace

bool is_valid_utf8(std::string_view text) {
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto n = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < n) {
    UChar32 c;
    U8_NEXT(s, i, n, c);
    if (c < 0) return false;
  }
  return true;
}

std::u32string decode(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto n = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < n) {
    UChar32 c;
    U8_NEXT(s, i, n, c);
    if (c < 0) throw DataError("ill-formed UTF-8 at byte " + std::to_string(i));
    out.push_back(static_cast<char32_t>(c));
  }
  return out;
}

std::string encode(std::u32string_view scalars) {
  std::string out;
  out.reserve(scalars.size());
  for (char32_t c : scalars) append_utf8(out, c);
  return out;
}

std::size_t scalar_length(std::string_view text) {
  std::size_t count = 0;
  for (unsigned char b : text) {
    if ((b & 0xC0) != 0x80) ++count;
  }
  return count;
}

std::string slice(std::u32string_view scalars, std::size_t start, std::size_t end) {
  return encode(scalars.substr(start, end - start));
}

char32_t lowercase_scalar(char32_t c) {
  if (c < 0x80) {
    return (c >= U'A' && c <= U'Z') ? c + 32 : c;
  }
  UChar src[2];
  int32_t src_len = 0;
  UBool error = false;
  U16_APPEND(src, src_len, 2, static_cast<UChar32>(c), error);
  if (error) return c;
  UChar dest[8];
  UErrorCode status = U_ZERO_ERROR;
  const int32_t len = u_strToLower(dest, 8, src, src_len, "", &status);
  if (U_FAILURE(status)) return c;
  int32_t i = 0;
  UChar32 lowered;
  U16_NEXT(dest, i, len, lowered);
  // Multi-scalar mappings (e.g. U+0130) are left alone.
  if (i != len) return c;
  return static_cast<char32_t>(lowered);
}

std::string lowercase_preserving_length(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t c : decode(text)) append_utf8(out, lowercase_scalar(c));
  return out;
}

std::string case_fold(std::string_view text) {
  bool ascii = true;
  for (unsigned char b : text) {
    if (b >= 0x80) {
      ascii = false;
      break;
    }
  }
  if (ascii) {
    std::string out(text);
    for (char& ch : out) {
      if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch + 32);
    }
    return out;
  }
  auto s = icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  s.foldCase(U_FOLD_CASE_DEFAULT);
  return to_utf8(s);
}

std::string strip_diacritics(std::string_view text) {
  bool ascii = true;
  for (unsigned char b : text) {
    if (b >= 0x80) {
      ascii = false;
      break;
    }
  }
  if (ascii) return std::string(text);

  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfd = icu::Normalizer2::getNFDInstance(status);
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error("ICU normalizer unavailable");

  const auto input = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  const icu::UnicodeString decomposed = nfd->normalize(input, status);
  if (U_FAILURE(status)) throw DataError("cannot normalize string");

  icu::UnicodeString stripped;
  for (int32_t i = 0; i < decomposed.length();) {
    const UChar32 c = decomposed.char32At(i);
    if (u_charType(c) != U_NON_SPACING_MARK) stripped.append(c);
    i += U16_LENGTH(c);
  }
  const icu::UnicodeString composed = nfc->normalize(stripped, status);
  if (U_FAILURE(status)) throw DataError("cannot normalize string");
  return to_utf8(composed);
}

bool is_whitespace(char32_t c) {
  if (c < 0x80) return c == ' ' || (c >= '\t' && c <= '\r');
  return u_isUWhiteSpace(static_cast<UChar32>(c));
}

bool is_uppercase(char32_t c) {
  if (c < 0x80) return c >= U'A' && c <= U'Z';
  const auto u = static_cast<UChar32>(c);
  return u_isUUppercase(u) || u_istitle(u);
}

std::vector<WordToken> word_tokens(std::u32string_view text) {
  std::vector<WordToken> tokens;
  if (text.empty()) return tokens;

  UErrorCode status = U_ZERO_ERROR;
  std::unique_ptr<icu::BreakIterator> it(
      icu::BreakIterator::createWordInstance(icu::Locale::getRoot(), status));
  if (U_FAILURE(status)) throw Error("ICU word break iterator unavailable");

  const icu::UnicodeString utf16 = to_icu(text);
  it->setText(utf16);

  // Break positions are UTF-16 indices; walk them alongside scalar offsets.
  std::size_t scalar_pos = 0;
  int32_t unit_pos = 0;
  auto advance_to = [&](int32_t target) {
    while (unit_pos < target) {
      unit_pos += U16_LENGTH(utf16.char32At(unit_pos));
      ++scalar_pos;
    }
    return scalar_pos;
  };

  int32_t start = it->first();
  for (int32_t end = it->next(); end != icu::BreakIterator::DONE; start = end, end = it->next()) {
    if (it->getRuleStatus() == UBRK_WORD_NONE) continue;
    const std::size_t s = advance_to(start);
    const std::size_t e = advance_to(end);
    tokens.push_back({s, e});
  }
  return tokens;
}

}  // namespace geobench::unicode

// SPDX-License-Identifier: Apache-2.0
#include "ocreval/unicode.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "ocreval/error.hpp"

namespace ocreval::unicode {

namespace {

const icu::Normalizer2& nfc_instance() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* instance = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || instance == nullptr) {
    throw Error(std::string("ICU NFC normalizer unavailable: ") + u_errorName(status));
  }
  return *instance;
}

icu::UnicodeString to_icu(std::string_view utf8) {
  if (!is_valid_utf8(utf8)) throw DataError("ill-formed UTF-8 text");
  return icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
}

std::string from_icu(const icu::UnicodeString& s) {
  std::string out;
  s.toUTF8String(out);
  return out;
}

}  // namespace

bool is_valid_utf8(std::string_view text) {
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    if (c < 0) return false;
  }
  return true;
}

std::u32string to_scalars(std::string_view utf8) {
  const auto* bytes = reinterpret_cast<const uint8_t*>(utf8.data());
  const auto length = static_cast<int32_t>(utf8.size());
  std::u32string out;
  out.reserve(utf8.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    if (c < 0) throw DataError("ill-formed UTF-8 at byte " + std::to_string(i));
    out.push_back(static_cast<char32_t>(c));
  }
  return out;
}

std::string to_utf8(std::u32string_view scalars) {
  std::string out;
  out.reserve(scalars.size());
  for (char32_t c : scalars) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t n = 0;
    UBool error = false;
    U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(c), error);
    if (error) throw DataError("not a Unicode scalar value: " + std::to_string(static_cast<uint32_t>(c)));
    out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
  }
  return out;
}

std::string to_utf8(char32_t scalar) { return to_utf8(std::u32string_view(&scalar, 1)); }

std::string nfc(std::string_view utf8) {
  const icu::Normalizer2& norm = nfc_instance();
  icu::UnicodeString s = to_icu(utf8);
  UErrorCode status = U_ZERO_ERROR;
  if (norm.isNormalized(s, status) && U_SUCCESS(status)) return std::string(utf8);
  status = U_ZERO_ERROR;
  icu::UnicodeString normalized = norm.normalize(s, status);
  if (U_FAILURE(status)) throw DataError(std::string("NFC normalization failed: ") + u_errorName(status));
  return from_icu(normalized);
}

bool is_nfc(std::string_view utf8) {
  if (!is_valid_utf8(utf8)) return false;
  UErrorCode status = U_ZERO_ERROR;
  const bool normalized = nfc_instance().isNormalized(to_icu(utf8), status);
  return U_SUCCESS(status) && normalized;
}

std::string to_upper(std::string_view utf8) {
  icu::UnicodeString s = to_icu(utf8);
  s.toUpper(icu::Locale::getRoot());
  return nfc(from_icu(s));
}

bool is_whitespace(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }

bool is_line_break(char32_t c) {
  switch (c) {
    case U'\n':
    case U'\r':
    case U'\v':
    case U'\f':
    case U'\u0085':
    case U'\u2028':
    case U'\u2029':
      return true;
    default:
      return false;
  }
}

bool contains_line_break(std::string_view utf8) {
  for (char32_t c : to_scalars(utf8)) {
    if (is_line_break(c)) return true;
  }
  return false;
}

std::vector<std::u32string> split_whitespace(std::u32string_view text) {
  std::vector<std::u32string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_whitespace(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_whitespace(text[i])) ++i;
    if (i > start) tokens.emplace_back(text.substr(start, i - start));
  }
  return tokens;
}

std::string trim(std::string_view utf8) {
  std::u32string s = to_scalars(utf8);
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && is_whitespace(s[begin])) ++begin;
  while (end > begin && is_whitespace(s[end - 1])) --end;
  return to_utf8(std::u32string_view(s).substr(begin, end - begin));
}

std::size_t scalar_count(std::string_view utf8) { return to_scalars(utf8).size(); }

}  // namespace ocreval::unicode

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ocreval::unicode {

/// True when `text` is well-formed UTF-8.
bool is_valid_utf8(std::string_view text);

/// Decodes UTF-8 into Unicode scalar values. Throws DataError on ill-formed input.
std::u32string to_scalars(std::string_view utf8);

std::string to_utf8(std::u32string_view scalars);
std::string to_utf8(char32_t scalar);

/// NFC normalization. Throws DataError on ill-formed input.
std::string nfc(std::string_view utf8);
bool is_nfc(std::string_view utf8);

/// Full (context-sensitive, possibly length-changing) uppercase mapping, root locale,
/// followed by NFC.
std::string to_upper(std::string_view utf8);

bool is_whitespace(char32_t c);

/// LF, CR, VT, FF, NEL, LINE SEPARATOR, PARAGRAPH SEPARATOR.
bool is_line_break(char32_t c);
bool contains_line_break(std::string_view utf8);

/// Splits on runs of Unicode whitespace; leading/trailing whitespace yields no tokens.
std::vector<std::u32string> split_whitespace(std::u32string_view text);

/// Strips leading and trailing Unicode whitespace.
std::string trim(std::string_view utf8);

/// Number of scalar values in a UTF-8 string (throws on ill-formed input).
std::size_t scalar_count(std::string_view utf8);

}  // namespace ocreval::unicode

// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cstdio>

#include "../io.hpp"
#include "ocreval/synth.hpp"
#include "ocreval/unicode.hpp"

namespace ocreval::synth {

namespace {

// Big-endian reader with bounds checks over the raw font file.
class FontReader {
 public:
  FontReader(std::string_view bytes, std::string_view source) : bytes_(bytes), source_(source) {}

  std::uint16_t u16(std::size_t at) const {
    check(at, 2);
    return static_cast<std::uint16_t>(byte(at) << 8 | byte(at + 1));
  }

  std::uint32_t u32(std::size_t at) const {
    check(at, 4);
    return static_cast<std::uint32_t>(byte(at)) << 24 | static_cast<std::uint32_t>(byte(at + 1)) << 16 |
           static_cast<std::uint32_t>(byte(at + 2)) << 8 | static_cast<std::uint32_t>(byte(at + 3));
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw DataError("font " + std::string(source_) + ": " + what);
  }

 private:
  unsigned byte(std::size_t at) const { return static_cast<unsigned char>(bytes_[at]); }

  void check(std::size_t at, std::size_t n) const {
    if (at > bytes_.size() || bytes_.size() - at < n) fail("truncated or malformed table data");
  }

  std::string_view bytes_;
  std::string_view source_;
};

using Ranges = std::vector<std::pair<char32_t, char32_t>>;

void read_format4(const FontReader& r, std::size_t table, Ranges& out) {
  const std::size_t seg_count = r.u16(table + 6) / 2;
  const std::size_t end_codes = table + 14;
  const std::size_t start_codes = end_codes + 2 * seg_count + 2;
  const std::size_t deltas = start_codes + 2 * seg_count;
  const std::size_t range_offsets = deltas + 2 * seg_count;
  for (std::size_t s = 0; s < seg_count; ++s) {
    const std::uint32_t end = r.u16(end_codes + 2 * s);
    const std::uint32_t start = r.u16(start_codes + 2 * s);
    const std::uint16_t delta = r.u16(deltas + 2 * s);
    const std::size_t range_offset_at = range_offsets + 2 * s;
    const std::uint16_t range_offset = r.u16(range_offset_at);
    if (start > end || start == 0xFFFF) continue;
    for (std::uint32_t c = start; c <= end; ++c) {
      std::uint16_t glyph = 0;
      if (range_offset == 0) {
        glyph = static_cast<std::uint16_t>(c + delta);
      } else {
        glyph = r.u16(range_offset_at + range_offset + 2 * (c - start));
        if (glyph != 0) glyph = static_cast<std::uint16_t>(glyph + delta);
      }
      if (glyph != 0) out.emplace_back(static_cast<char32_t>(c), static_cast<char32_t>(c));
    }
  }
}

void read_format12(const FontReader& r, std::size_t table, Ranges& out) {
  const std::uint32_t groups = r.u32(table + 12);
  for (std::uint32_t g = 0; g < groups; ++g) {
    const std::size_t at = table + 16 + 12 * static_cast<std::size_t>(g);
    char32_t first = r.u32(at);
    const char32_t last = r.u32(at + 4);
    const std::uint32_t start_glyph = r.u32(at + 8);
    if (start_glyph == 0) ++first;  // first code maps to .notdef
    if (first <= last && last <= 0x10FFFF) out.emplace_back(first, last);
  }
}

bool ignorable(char32_t c) {
  return unicode::is_whitespace(c) || (c >= 0x200B && c <= 0x200F) || (c >= 0x2060 && c <= 0x2064) ||
         c == 0xFEFF || c == 0x00AD;
}

}  // namespace

FontCoverage FontCoverage::load(const std::filesystem::path& path) {
  const std::string bytes = detail::read_file(path);
  return parse(bytes, path.string());
}

FontCoverage FontCoverage::parse(std::string_view bytes, std::string_view source) {
  FontReader r(bytes, source);
  std::size_t font = 0;
  if (r.u32(0) == 0x74746366) {  // 'ttcf': use the first face
    font = r.u32(12);
  }
  const std::uint32_t version = r.u32(font);
  if (version != 0x00010000 && version != 0x4F54544F && version != 0x74727565) {
    r.fail("not a TrueType/OpenType font");
  }
  const std::uint16_t tables = r.u16(font + 4);
  std::optional<std::size_t> cmap;
  for (std::uint16_t t = 0; t < tables; ++t) {
    const std::size_t record = font + 12 + 16 * static_cast<std::size_t>(t);
    if (r.u32(record) == 0x636D6170) cmap = r.u32(record + 8);  // 'cmap'
  }
  if (!cmap) r.fail("no cmap table");

  Ranges ranges;
  const std::uint16_t subtables = r.u16(*cmap + 2);
  for (std::uint16_t s = 0; s < subtables; ++s) {
    const std::size_t record = *cmap + 4 + 8 * static_cast<std::size_t>(s);
    const std::uint16_t platform = r.u16(record);
    const std::uint16_t encoding = r.u16(record + 2);
    const bool unicode_table = platform == 0 || (platform == 3 && (encoding == 1 || encoding == 10));
    if (!unicode_table) continue;
    const std::size_t table = *cmap + r.u32(record + 4);
    const std::uint16_t format = r.u16(table);
    if (format == 4) read_format4(r, table, ranges);
    if (format == 12) read_format12(r, table, ranges);
  }
  if (ranges.empty()) r.fail("no usable Unicode cmap subtable");

  std::ranges::sort(ranges);
  FontCoverage coverage;
  for (const auto& [first, last] : ranges) {
    if (!coverage.segments_.empty() && first <= coverage.segments_.back().last + 1) {
      coverage.segments_.back().last = std::max(coverage.segments_.back().last, last);
    } else {
      coverage.segments_.push_back({first, last});
    }
  }
  return coverage;
}

bool FontCoverage::has_glyph(char32_t c) const {
  auto it = std::ranges::upper_bound(segments_, c, {}, &Segment::first);
  if (it == segments_.begin()) return false;
  --it;
  return c <= it->last;
}

std::optional<char32_t> FontCoverage::first_missing(std::u32string_view text) const {
  for (char32_t c : text) {
    if (!ignorable(c) && !has_glyph(c)) return c;
  }
  return std::nullopt;
}

namespace {

std::string describe_scalar(char32_t c) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "U+%04X", static_cast<unsigned>(c));
  std::string out = buf;
  try {
    out += " '" + unicode::to_utf8(c) + "'";
  } catch (const DataError&) {
  }
  return out;
}

}  // namespace

MissingGlyphError::MissingGlyphError(char32_t scalar, std::filesystem::path font)
    : DataError("font " + font.string() + " has no glyph for " + describe_scalar(scalar)),
      scalar_(scalar),
      font_(std::move(font)) {}

}  // namespace ocreval::synth

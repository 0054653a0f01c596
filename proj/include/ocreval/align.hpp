// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ocreval/corpus.hpp"
#include "ocreval/edit_distance.hpp"

namespace ocreval {

/// One step of a scalar-level alignment from reference to hypothesis.
struct AlignOp {
  EditKind kind = EditKind::Match;
  std::optional<char32_t> ref_char;  // absent for Insert
  std::optional<char32_t> hyp_char;  // absent for Delete

  friend bool operator==(const AlignOp&, const AlignOp&) = default;
};

/// Maximal run of adjacent non-Match operations.
struct ErrorSegment {
  std::string ref_str;
  std::string hyp_str;

  friend bool operator==(const ErrorSegment&, const ErrorSegment&) = default;
  friend auto operator<=>(const ErrorSegment&, const ErrorSegment&) = default;
};

struct ErrorTableRow {
  ErrorSegment segment;
  std::size_t n_e = 0;
  // Only for single-scalar reference sides.
  std::optional<std::size_t> n_m;
  std::optional<std::size_t> n_c;

  friend bool operator==(const ErrorTableRow&, const ErrorTableRow&) = default;
};

/// Levenshtein alignment (unit costs, no transpositions) of two NFC strings at
/// scalar level. Ties: diagonal > delete > insert during traceback.
std::vector<AlignOp> align(std::string_view ref, std::string_view hyp);
std::vector<AlignOp> align(std::u32string_view ref, std::u32string_view hyp);

std::vector<ErrorSegment> merge_segments(const std::vector<AlignOp>& ops);

/// Count-merging accumulator behind tabulate_errors. Accumulators for disjoint
/// subsets of pairs can be merged in any order.
class ErrorTally {
 public:
  void add(std::string_view ref, std::string_view hyp);
  void merge(const ErrorTally& other);
  /// Rows sorted by n_e descending, then (ref_str, hyp_str); at most top_n rows.
  std::vector<ErrorTableRow> rows(std::size_t top_n) const;

 private:
  std::vector<std::pair<ErrorSegment, std::size_t>> sorted_segments() const;

  std::map<ErrorSegment, std::size_t> segments_;
  std::map<char32_t, std::size_t> misses_;       // segments whose ref side is one scalar
  std::map<char32_t, std::size_t> occurrences_;  // reference scalars
};

/// Most frequent error segments across all pairs. Throws std::invalid_argument
/// if top_n < 1.
std::vector<ErrorTableRow> tabulate_errors(const std::vector<LinePair>& pairs, std::size_t top_n,
                                           unsigned jobs = 1);

inline constexpr std::size_t kDefaultTopN = 10;

/// CSV (RFC 4180) with header `ref,hyp,n_e,n_m,n_c`; absent counts are empty cells.
std::string error_table_csv(const std::vector<ErrorTableRow>& rows);
/// GitHub-flavoured markdown table; absent counts render as "--".
std::string error_table_markdown(const std::vector<ErrorTableRow>& rows);

}  // namespace ocreval

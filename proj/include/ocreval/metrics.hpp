// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ocreval/corpus.hpp"
#include "ocreval/eval_report.hpp"

namespace ocreval {

/// Location-free counts of one character in a reference/hypothesis pair.
struct CharCounts {
  char32_t ch = 0;
  std::size_t n_true = 0;
  std::size_t n_pred = 0;
  std::size_t tp = 0;
  std::size_t fn = 0;
  std::size_t fp = 0;

  static CharCounts from_counts(char32_t ch, std::size_t n_true, std::size_t n_pred);

  CharCounts& operator+=(const CharCounts& other);
  friend bool operator==(const CharCounts&, const CharCounts&) = default;
};

/// 2TP / (2TP + FN + FP); absent when the denominator is zero.
std::optional<double> f1_score(std::size_t tp, std::size_t fn, std::size_t fp);

/// Characters-of-interest for the F1 metric.
struct CharacterSet {
  std::string name;
  std::set<char32_t> chars;

  /// Throws DataError if empty or if a member is not an NFC single scalar.
  static CharacterSet make(std::string name, std::string_view utf8_chars);
};

/// Built-in sets: "sme-special", "sma-special", "smj-special", "smn-special",
/// and "all-sami-special". These are defaults, not ground truth; load a
/// character-set file to override them.
const std::map<std::string, CharacterSet>& default_character_sets();

/// Parses lines of the form `name = "chars"` (TOML-compatible).
std::vector<CharacterSet> parse_character_sets(std::string_view text,
                                               std::string_view source = "<string>");
std::vector<CharacterSet> load_character_sets(const std::filesystem::path& path);

/// Resolves a built-in name, a character-set file holding exactly one set, or
/// `file#name`.
CharacterSet resolve_character_set(std::string_view spec);

/// Scalar-level Levenshtein distance of two UTF-8 strings.
std::size_t edit_distance(std::string_view a, std::string_view b);

/// Errors over reference units; the ratio is the error rate.
struct ErrorCounts {
  std::size_t errors = 0;
  std::size_t reference_units = 0;

  double rate() const;  // throws UndefinedMetric when reference_units == 0
  ErrorCounts& operator+=(const ErrorCounts& other);
};

/// Sum of per-line scalar distances over the sum of reference lengths.
ErrorCounts cer_counts(const std::vector<LinePair>& pairs, unsigned jobs = 1);
double cer(const std::vector<LinePair>& pairs, unsigned jobs = 1);

/// Token distance between the space-joined reference and hypothesis sequences,
/// each split on runs of Unicode whitespace.
ErrorCounts wer_counts(const std::vector<LinePair>& pairs);
double wer(const std::vector<LinePair>& pairs);

struct CharF1Result {
  std::map<char32_t, CharCounts> counts;  // summed over lines, one per member of cs
  std::map<char32_t, std::optional<double>> per_char;
  CharCounts total;
  std::optional<double> overall;
};

CharF1Result char_f1(const std::vector<LinePair>& pairs, const CharacterSet& cs);

struct EvaluateOptions {
  std::string model_name = "hyp";
  unsigned jobs = 1;
};

/// Overall metrics and, when grouping, one group per reference language.
/// Throws std::invalid_argument on an empty pair list and DataError if grouping
/// is requested for a pair without a language.
EvalReport evaluate(const std::vector<LinePair>& pairs, const CharacterSet& cs,
                    bool group_by_language, const EvaluateOptions& options = {});

/// Name with the smallest mean(CER, WER); ties go to the lexicographically
/// smallest name. Throws std::invalid_argument on an empty map.
std::string select_best(const std::map<std::string, MetricValues>& candidates);

}  // namespace ocreval

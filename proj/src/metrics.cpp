// SPDX-License-Identifier: Apache-2.0
#include "ocreval/metrics.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "ocreval/edit_distance.hpp"
#include "ocreval/error.hpp"
#include "ocreval/parallel.hpp"
#include "ocreval/unicode.hpp"

namespace ocreval {

CharCounts CharCounts::from_counts(char32_t ch, std::size_t n_true, std::size_t n_pred) {
  CharCounts c;
  c.ch = ch;
  c.n_true = n_true;
  c.n_pred = n_pred;
  c.tp = std::min(n_true, n_pred);
  c.fn = n_true > n_pred ? n_true - n_pred : 0;
  c.fp = n_pred > n_true ? n_pred - n_true : 0;
  return c;
}

CharCounts& CharCounts::operator+=(const CharCounts& other) {
  n_true += other.n_true;
  n_pred += other.n_pred;
  tp += other.tp;
  fn += other.fn;
  fp += other.fp;
  return *this;
}

std::optional<double> f1_score(std::size_t tp, std::size_t fn, std::size_t fp) {
  const std::size_t denominator = 2 * tp + fn + fp;
  if (denominator == 0) return std::nullopt;
  return static_cast<double>(2 * tp) / static_cast<double>(denominator);
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  return edit_distance(unicode::to_scalars(a), unicode::to_scalars(b));
}

double ErrorCounts::rate() const {
  if (reference_units == 0) throw UndefinedMetric("undefined error rate: empty reference");
  return static_cast<double>(errors) / static_cast<double>(reference_units);
}

ErrorCounts& ErrorCounts::operator+=(const ErrorCounts& other) {
  errors += other.errors;
  reference_units += other.reference_units;
  return *this;
}

ErrorCounts cer_counts(const std::vector<LinePair>& pairs, unsigned jobs) {
  std::vector<ErrorCounts> per_line(pairs.size());
  parallel_for(pairs.size(), jobs, [&](std::size_t i) {
    const std::u32string ref = unicode::to_scalars(unicode::nfc(pairs[i].reference.text));
    const std::u32string hyp = unicode::to_scalars(unicode::nfc(pairs[i].hypothesis_text));
    per_line[i] = ErrorCounts{edit_distance(ref, hyp), ref.size()};
  });
  ErrorCounts total;
  for (const auto& c : per_line) total += c;
  return total;
}

double cer(const std::vector<LinePair>& pairs, unsigned jobs) {
  const ErrorCounts counts = cer_counts(pairs, jobs);
  if (counts.reference_units == 0) throw UndefinedMetric("undefined CER: reference has no characters");
  return counts.rate();
}

ErrorCounts wer_counts(const std::vector<LinePair>& pairs) {
  std::u32string ref;
  std::u32string hyp;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i > 0) {
      ref.push_back(U' ');
      hyp.push_back(U' ');
    }
    ref += unicode::to_scalars(unicode::nfc(pairs[i].reference.text));
    hyp += unicode::to_scalars(unicode::nfc(pairs[i].hypothesis_text));
  }
  const auto ref_tokens = unicode::split_whitespace(ref);
  const auto hyp_tokens = unicode::split_whitespace(hyp);
  return ErrorCounts{edit_distance(ref_tokens, hyp_tokens), ref_tokens.size()};
}

double wer(const std::vector<LinePair>& pairs) {
  const ErrorCounts counts = wer_counts(pairs);
  if (counts.reference_units == 0) throw UndefinedMetric("undefined WER: reference has no tokens");
  return counts.rate();
}

CharF1Result char_f1(const std::vector<LinePair>& pairs, const CharacterSet& cs) {
  CharF1Result result;
  for (char32_t c : cs.chars) result.counts[c] = CharCounts::from_counts(c, 0, 0);
  std::map<char32_t, std::size_t> in_ref;
  std::map<char32_t, std::size_t> in_hyp;
  for (const auto& pair : pairs) {
    in_ref.clear();
    in_hyp.clear();
    for (char32_t c : unicode::to_scalars(unicode::nfc(pair.reference.text))) {
      if (cs.chars.contains(c)) ++in_ref[c];
    }
    for (char32_t c : unicode::to_scalars(unicode::nfc(pair.hypothesis_text))) {
      if (cs.chars.contains(c)) ++in_hyp[c];
    }
    for (char32_t c : cs.chars) {
      const auto r = in_ref.find(c);
      const auto h = in_hyp.find(c);
      result.counts[c] += CharCounts::from_counts(c, r == in_ref.end() ? 0 : r->second,
                                                  h == in_hyp.end() ? 0 : h->second);
    }
  }
  for (const auto& [c, counts] : result.counts) {
    result.per_char[c] = f1_score(counts.tp, counts.fn, counts.fp);
    result.total += counts;
  }
  result.overall = f1_score(result.total.tp, result.total.fn, result.total.fp);
  return result;
}

namespace {

MetricValues group_metrics(const std::vector<LinePair>& pairs, const CharacterSet& cs, unsigned jobs,
                           const std::string& group) {
  try {
    return MetricValues::make(cer(pairs, jobs), wer(pairs), char_f1(pairs, cs).overall);
  } catch (const UndefinedMetric& e) {
    throw UndefinedMetric(std::string(e.what()) + " (group '" + group + "')");
  }
}

}  // namespace

EvalReport evaluate(const std::vector<LinePair>& pairs, const CharacterSet& cs, bool group_by_language,
                    const EvaluateOptions& options) {
  if (pairs.empty()) throw std::invalid_argument("evaluate: no line pairs");
  EvalReport report;
  report.model_name = options.model_name;
  report.pair_count = pairs.size();
  report.groups[kOverallGroup] = group_metrics(pairs, cs, options.jobs, kOverallGroup);
  if (group_by_language) {
    std::map<std::string, std::vector<LinePair>> by_language;
    for (const auto& pair : pairs) {
      if (pair.reference.language.empty()) {
        throw DataError("pair without a language tag: " + pair.reference.id);
      }
      by_language[pair.reference.language].push_back(pair);
    }
    for (const auto& [language, group] : by_language) {
      if (language == kOverallGroup) throw DataError("'overall' cannot be used as a language code");
      report.groups[language] = group_metrics(group, cs, options.jobs, language);
    }
  }
  return report;
}

std::string select_best(const std::map<std::string, MetricValues>& candidates) {
  if (candidates.empty()) throw std::invalid_argument("select_best: no candidates");
  const std::string* best = nullptr;
  double best_mean = std::numeric_limits<double>::infinity();
  for (const auto& [name, values] : candidates) {
    // Map order is lexicographic, so strict < keeps the smallest name on ties.
    if (best == nullptr || values.mean_cer_wer < best_mean) {
      best = &name;
      best_mean = values.mean_cer_wer;
    }
  }
  return *best;
}

}  // namespace ocreval

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ocreval/align.hpp"

namespace ocreval {

/// CER/WER as fractions (may exceed 1); F1 in [0,1] or absent when undefined.
struct MetricValues {
  double cer = 0;
  double wer = 0;
  std::optional<double> f1;
  double mean_cer_wer = 0;

  static MetricValues make(double cer, double wer, std::optional<double> f1 = std::nullopt) {
    return MetricValues{cer, wer, f1, (cer + wer) / 2};
  }

  friend bool operator==(const MetricValues&, const MetricValues&) = default;
};

inline constexpr const char* kOverallGroup = "overall";

struct EvalReport {
  std::string model_name;
  std::map<std::string, MetricValues> groups;  // always holds kOverallGroup
  std::vector<ErrorTableRow> error_table;
  std::size_t pair_count = 0;
  std::optional<std::string> created;  // ISO 8601 UTC

  const MetricValues& overall() const { return groups.at(kOverallGroup); }

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

}  // namespace ocreval

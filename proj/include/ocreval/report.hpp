// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nlohmann/json.hpp"
#include "ocreval/eval_report.hpp"

namespace ocreval {

/// Several models evaluated on the same data, optionally against a baseline.
struct Comparison {
  std::vector<EvalReport> reports;
  std::optional<std::string> baseline_name;

  /// Throws DataError on duplicate model names, an unknown baseline, a report
  /// without an "overall" group, or a zero pair count.
  void validate() const;

  /// Insertion order with the baseline moved last.
  std::vector<const EvalReport*> column_order() const;
};

/// Rows are (metric, group), columns are models. Percentages with two decimals,
/// best value per row in bold, undefined F1 as "—". Error tables follow, one
/// section per model that has one.
std::string emit_markdown(const Comparison& comparison);
/// One row per (model, group), full precision.
std::string emit_csv(const Comparison& comparison);
/// Stable key order, full precision; round-trips through comparison_from_json.
std::string emit_json(const Comparison& comparison);

nlohmann::json to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Comparison& comparison);
Comparison comparison_from_json(const nlohmann::json& j);

/// Accepts either a single serialized EvalReport or a Comparison.
Comparison parse_comparison(std::string_view text, std::string_view source = "<string>");
Comparison read_comparison(const std::filesystem::path& path);

/// Percent with half-up rounding to two decimals ("0.61" for 0.0061).
std::string format_percent(double fraction);

enum class Metric { CER, WER };
std::string_view to_string(Metric metric);

/// baseline / model on the overall group for CER and WER, per non-baseline
/// model. Zero model values map to +infinity. Throws DataError without a
/// baseline or when a baseline metric is not positive.
std::map<std::pair<std::string, Metric>, double> improvement_factors(const Comparison& comparison);

std::string improvement_factors_markdown(const Comparison& comparison);

}  // namespace ocreval

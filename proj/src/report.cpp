// SPDX-License-Identifier: Apache-2.0
#include "ocreval/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include "io.hpp"
#include "ocreval/error.hpp"

using nlohmann::json;

namespace ocreval {

namespace {

std::string shortest(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json optional_count(const std::optional<std::size_t>& v) { return v ? json(*v) : json(nullptr); }

template <typename T>
std::optional<T> read_optional(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

const json& member(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw DataError(std::string("report JSON: missing '") + key + "'");
  return *it;
}

// Groups in display order: overall first, then the rest alphabetically.
std::vector<std::string> group_order(const std::vector<const EvalReport*>& reports) {
  std::set<std::string> names;
  for (const auto* r : reports) {
    for (const auto& [name, values] : r->groups) names.insert(name);
  }
  std::vector<std::string> order;
  if (names.erase(kOverallGroup)) order.emplace_back(kOverallGroup);
  order.insert(order.end(), names.begin(), names.end());
  return order;
}

struct MetricRow {
  const char* label;
  bool lower_is_better;
  std::optional<double> (*get)(const MetricValues&);
};

const MetricRow kMetricRows[] = {
    {"CER ↓ [%]", true, [](const MetricValues& v) -> std::optional<double> { return v.cer; }},
    {"WER ↓ [%]", true, [](const MetricValues& v) -> std::optional<double> { return v.wer; }},
    {"F1 ↑ [%]", false, [](const MetricValues& v) { return v.f1; }},
};

}  // namespace

void Comparison::validate() const {
  std::set<std::string_view> names;
  for (const auto& report : reports) {
    if (!names.insert(report.model_name).second) {
      throw DataError("duplicate model name in comparison: " + report.model_name);
    }
    if (!report.groups.contains(kOverallGroup)) {
      throw DataError("report for " + report.model_name + " has no 'overall' group");
    }
    if (report.pair_count == 0) throw DataError("report for " + report.model_name + " has no pairs");
  }
  if (baseline_name && !names.contains(*baseline_name)) {
    throw DataError("baseline '" + *baseline_name + "' is not among the reports");
  }
}

std::vector<const EvalReport*> Comparison::column_order() const {
  std::vector<const EvalReport*> order;
  const EvalReport* baseline = nullptr;
  for (const auto& report : reports) {
    if (baseline_name && report.model_name == *baseline_name) {
      baseline = &report;
    } else {
      order.push_back(&report);
    }
  }
  if (baseline) order.push_back(baseline);
  return order;
}

std::string format_percent(double fraction) {
  if (std::isnan(fraction)) return "nan";
  if (std::isinf(fraction)) return fraction > 0 ? "inf" : "-inf";
  const bool negative = fraction < 0;
  // Hundredths of a percent, half-up. The small epsilon absorbs binary
  // representation error (e.g. 0.02325 stored as 0.0232499999...).
  const double hundredths = std::floor(std::abs(fraction) * 10000.0 + 0.5 + 1e-7);
  const auto units = static_cast<unsigned long long>(hundredths);
  std::string frac = std::to_string(units % 100);
  if (frac.size() < 2) frac.insert(0, "0");
  return (negative && units != 0 ? "-" : "") + std::to_string(units / 100) + "." + frac;
}

std::string_view to_string(Metric metric) { return metric == Metric::CER ? "cer" : "wer"; }

// ---------------------------------------------------------------------------
// JSON

json to_json(const EvalReport& report) {
  json j;
  j["model_name"] = report.model_name;
  j["pair_count"] = report.pair_count;
  j["created"] = report.created ? json(*report.created) : json(nullptr);
  j["groups"] = json::object();
  for (const auto& [name, v] : report.groups) {
    j["groups"][name] = {{"cer", v.cer}, {"wer", v.wer}, {"f1", optional_number(v.f1)},
                         {"mean_cer_wer", v.mean_cer_wer}};
  }
  j["error_table"] = json::array();
  for (const auto& row : report.error_table) {
    j["error_table"].push_back({{"ref", row.segment.ref_str},
                                {"hyp", row.segment.hyp_str},
                                {"n_e", row.n_e},
                                {"n_m", optional_count(row.n_m)},
                                {"n_c", optional_count(row.n_c)}});
  }
  return j;
}

EvalReport report_from_json(const json& j) {
  try {
    EvalReport report;
    report.model_name = member(j, "model_name").get<std::string>();
    report.pair_count = member(j, "pair_count").get<std::size_t>();
    report.created = read_optional<std::string>(j, "created");
    for (const auto& [name, v] : member(j, "groups").items()) {
      // The mean is recomputed so that it is exactly (cer + wer) / 2.
      report.groups[name] = MetricValues::make(member(v, "cer").get<double>(), member(v, "wer").get<double>(),
                                               read_optional<double>(v, "f1"));
    }
    if (auto it = j.find("error_table"); it != j.end()) {
      for (const auto& row : *it) {
        report.error_table.push_back(ErrorTableRow{
            ErrorSegment{member(row, "ref").get<std::string>(), member(row, "hyp").get<std::string>()},
            member(row, "n_e").get<std::size_t>(), read_optional<std::size_t>(row, "n_m"),
            read_optional<std::size_t>(row, "n_c")});
      }
    }
    return report;
  } catch (const json::exception& e) {
    throw DataError(std::string("report JSON: ") + e.what());
  }
}

json to_json(const Comparison& comparison) {
  json j;
  j["baseline"] = comparison.baseline_name ? json(*comparison.baseline_name) : json(nullptr);
  j["reports"] = json::array();
  for (const auto& report : comparison.reports) j["reports"].push_back(to_json(report));
  return j;
}

Comparison comparison_from_json(const json& j) {
  Comparison comparison;
  try {
    comparison.baseline_name = read_optional<std::string>(j, "baseline");
  } catch (const json::exception& e) {
    throw DataError(std::string("comparison JSON: ") + e.what());
  }
  for (const auto& report : member(j, "reports")) comparison.reports.push_back(report_from_json(report));
  comparison.validate();
  return comparison;
}

Comparison parse_comparison(std::string_view text, std::string_view source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(source), 0, e.byte, e.what());
  }
  if (!j.is_object()) throw DataError(std::string(source) + ": expected a JSON object");
  if (j.contains("reports")) return comparison_from_json(j);
  Comparison single;
  single.reports.push_back(report_from_json(j));
  single.validate();
  return single;
}

Comparison read_comparison(const std::filesystem::path& path) {
  return parse_comparison(detail::read_file(path), path.string());
}

std::string emit_json(const Comparison& comparison) {
  comparison.validate();
  return to_json(comparison).dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// CSV

std::string emit_csv(const Comparison& comparison) {
  comparison.validate();
  const auto columns = comparison.column_order();
  std::string out = "model,group,cer,wer,f1,mean_cer_wer,pair_count\r\n";
  auto field = [](std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };
  for (const auto* report : columns) {
    for (const auto& group : group_order({report})) {
      const auto& v = report->groups.at(group);
      out += field(report->model_name) + "," + field(group) + "," + shortest(v.cer) + "," + shortest(v.wer) +
             "," + (v.f1 ? shortest(*v.f1) : "") + "," + shortest(v.mean_cer_wer) + "," +
             std::to_string(report->pair_count) + "\r\n";
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Markdown

std::string emit_markdown(const Comparison& comparison) {
  comparison.validate();
  const auto columns = comparison.column_order();
  const auto groups = group_order(columns);

  std::string out = "| Metric | Group |";
  std::string rule = "|---|---|";
  for (const auto* report : columns) {
    out += " " + report->model_name + " |";
    rule += "---:|";
  }
  out += "\n" + rule + "\n";

  for (const auto& metric : kMetricRows) {
    for (const auto& group : groups) {
      std::vector<std::optional<std::string>> cells;
      std::optional<std::string> best;
      for (const auto* report : columns) {
        auto it = report->groups.find(group);
        std::optional<double> value;
        if (it != report->groups.end()) value = metric.get(it->second);
        if (!value) {
          cells.emplace_back(std::nullopt);
          continue;
        }
        std::string shown = format_percent(*value);
        cells.emplace_back(shown);
        // Compare the displayed values so that visually tied cells are all marked.
        const double rounded = std::stod(shown);
        if (!best || (metric.lower_is_better ? rounded < std::stod(*best) : rounded > std::stod(*best))) {
          best = shown;
        }
      }
      out += "| " + std::string(metric.label) + " | " + group + " |";
      for (const auto& cell : cells) {
        if (!cell) {
          out += " — |";
        } else if (best && std::stod(*cell) == std::stod(*best)) {
          out += " **" + *cell + "** |";
        } else {
          out += " " + *cell + " |";
        }
      }
      out += "\n";
    }
  }

  if (comparison.baseline_name && columns.size() > 1) {
    try {
      out += "\n" + improvement_factors_markdown(comparison);
    } catch (const DataError&) {
      // Factors are undefined when a baseline metric is zero.
    }
  }

  for (const auto* report : columns) {
    if (report->error_table.empty()) continue;
    out += "\n### Most common errors: " + report->model_name + "\n\n";
    out += error_table_markdown(report->error_table);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Improvement factors

std::map<std::pair<std::string, Metric>, double> improvement_factors(const Comparison& comparison) {
  comparison.validate();
  if (!comparison.baseline_name) throw DataError("improvement factors need a baseline");
  const EvalReport* baseline = nullptr;
  for (const auto& report : comparison.reports) {
    if (report.model_name == *comparison.baseline_name) baseline = &report;
  }
  const MetricValues& base = baseline->overall();
  if (base.cer <= 0 || base.wer <= 0) throw DataError("baseline CER and WER must be positive");

  auto factor = [](double base_value, double model_value) {
    return model_value == 0 ? std::numeric_limits<double>::infinity() : base_value / model_value;
  };
  std::map<std::pair<std::string, Metric>, double> factors;
  for (const auto& report : comparison.reports) {
    if (&report == baseline) continue;
    factors[{report.model_name, Metric::CER}] = factor(base.cer, report.overall().cer);
    factors[{report.model_name, Metric::WER}] = factor(base.wer, report.overall().wer);
  }
  return factors;
}

std::string improvement_factors_markdown(const Comparison& comparison) {
  const auto factors = improvement_factors(comparison);
  std::string out = "| Improvement over " + *comparison.baseline_name + " | CER | WER |\n|---|---:|---:|\n";
  for (const auto* report : comparison.column_order()) {
    if (report->model_name == *comparison.baseline_name) continue;
    auto fmt = [](double f) {
      if (std::isinf(f)) return std::string("inf");
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.2f", f);
      return std::string(buf);
    };
    out += "| " + report->model_name + " | " + fmt(factors.at({report->model_name, Metric::CER})) + " | " +
           fmt(factors.at({report->model_name, Metric::WER})) + " |\n";
  }
  return out;
}

}  // namespace ocreval

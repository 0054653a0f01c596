// SPDX-License-Identifier: Apache-2.0
// Acceptance suite: one PASS/FAIL line per criterion. With no arguments every
// criterion runs; `ocreval_acceptance 4 7` runs a subset. Exit status is the
// number of failed criteria (capped at 1).
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>
#include <string>
#include <vector>

#include "nlohmann/json.hpp"
#include "ocreval/align.hpp"
#include "ocreval/cli.hpp"
#include "ocreval/corpus.hpp"
#include "ocreval/error.hpp"
#include "ocreval/metrics.hpp"
#include "ocreval/report.hpp"
#include "ocreval/synth.hpp"
#include "support/fixture_pairs.hpp"
#include "support/generators.hpp"
#include "support/temp_dir.hpp"

using namespace ocreval;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

bool rel_close(double actual, double expected, double rel = 1e-9) {
  return std::abs(actual - expected) <= rel * std::max(1.0, std::abs(expected));
}

// Full-matrix DP written independently of the library's two-row version.
std::size_t brute_force_distance(const std::u32string& a, const std::u32string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] != b[j - 1])});
    }
  }
  return d[a.size()][b.size()];
}

const std::u32string kAcceptanceAlphabet = U"áčđŋšžâïabcdefghijklmnopqrstuvwxyzABCXYZ 0123.,-";

Outcome edit_distance_oracle() {
  const auto start = Clock::now();
  testgen::Gen g(0xacc1);
  const int n = 2000;
  int mismatches = 0;
  for (int k = 0; k < n; ++k) {
    const auto a = g.scalars(20, kAcceptanceAlphabet);
    const auto b = g.coin() ? g.perturb(a, 6, kAcceptanceAlphabet) : g.scalars(20, kAcceptanceAlphabet);
    if (a.size() > 20 || b.size() > 20) continue;
    mismatches += edit_distance(unicode::to_utf8(a), unicode::to_utf8(b)) != brute_force_distance(a, b);
  }
  const double t = seconds_since(start);
  return {mismatches == 0 && t < 5.0, fmt("%d pairs, %d mismatches, %.3f s (limit 5 s)", n, mismatches, t)};
}

Outcome metric_fixture() {
  const auto pairs = testenv::metric_fixture();
  const auto cs = resolve_character_set("all-sami-special");
  const auto r = evaluate(pairs, cs, true);
  struct Expect {
    std::string group;
    double cer, wer, f1;
  };
  const std::vector<Expect> expected{{"overall", 20.0 / 108, 8.0 / 19, 5.0 / 8},
                                     {"sme", 6.0 / 58, 4.0 / 12, 8.0 / 13},
                                     {"sma", 14.0 / 50, 4.0 / 7, 2.0 / 3}};
  int bad = 0, checked = 0;
  for (const auto& e : expected) {
    const auto& v = r.groups.at(e.group);
    bad += !rel_close(v.cer, e.cer) + !rel_close(v.wer, e.wer) + !(v.f1 && rel_close(*v.f1, e.f1));
    checked += 3;
  }
  const std::map<char32_t, double> per_char{{U'Á', 0.0}, {U'á', 2.0 / 3}, {U'ï', 2.0 / 3}, {U'č', 0.0},
                                            {U'đ', 0.0}, {U'ŋ', 1.0},     {U'š', 1.0},     {U'ž', 2.0 / 3}};
  const auto f1 = char_f1(pairs, cs);
  for (const auto& [ch, value] : f1.per_char) {
    ++checked;
    const auto it = per_char.find(ch);
    if (it == per_char.end()) {
      bad += value.has_value();
    } else {
      bad += !(value && rel_close(*value, it->second));
    }
  }
  return {bad == 0, fmt("%d values checked at 1e-9 relative, %d off", checked, bad)};
}

Outcome f1_formula() {
  testgen::Gen g(0xacc3);
  const int n = 10000;
  int violations = 0;
  for (int k = 0; k < n; ++k) {
    const auto ref = g.scalars(20, kAcceptanceAlphabet);
    const auto hyp = g.coin() ? g.perturb(ref, 6, kAcceptanceAlphabet) : g.scalars(20, kAcceptanceAlphabet);
    const auto cs = CharacterSet::make("random", unicode::to_utf8(g.subset(kAcceptanceAlphabet)));
    std::vector<LinePair> pairs{testenv::pair(unicode::to_utf8(ref), unicode::to_utf8(hyp))};
    if (g.coin()) {
      const auto extra = g.scalars(10, kAcceptanceAlphabet);
      pairs.push_back(testenv::pair(unicode::to_utf8(extra), unicode::to_utf8(g.perturb(extra, 3, kAcceptanceAlphabet))));
    }
    const auto r = char_f1(pairs, cs);
    bool ok = true;
    CharCounts total;
    for (const auto& [ch, c] : r.counts) {
      std::size_t n_true = 0, n_pred = 0;
      for (const auto& p : pairs) {
        const auto rs = unicode::to_scalars(p.reference.text), hs = unicode::to_scalars(p.hypothesis_text);
        const auto t = static_cast<std::size_t>(std::count(rs.begin(), rs.end(), ch));
        const auto q = static_cast<std::size_t>(std::count(hs.begin(), hs.end(), ch));
        n_true += t;
        n_pred += q;
        // Per line: tp = min, fn = max(delta, 0), fp = max(-delta, 0).
        total.tp += std::min(t, q);
        total.fn += t > q ? t - q : 0;
        total.fp += q > t ? q - t : 0;
      }
      ok &= c.n_true == n_true && c.n_pred == n_pred;
      ok &= c.tp + c.fn == c.n_true && c.tp + c.fp == c.n_pred;
      const auto f = r.per_char.at(ch);
      const std::size_t denom = 2 * c.tp + c.fn + c.fp;
      ok &= f.has_value() == (denom != 0);
      if (f) ok &= *f >= 0 && *f <= 1 && *f == 2.0 * c.tp / denom;
    }
    ok &= total.tp == r.total.tp && total.fn == r.total.fn && total.fp == r.total.fp;
    const std::size_t denom = 2 * total.tp + total.fn + total.fp;
    ok &= r.overall.has_value() == (denom != 0);
    if (r.overall) ok &= *r.overall >= 0 && *r.overall <= 1 && *r.overall == 2.0 * total.tp / denom;
    violations += !ok;
  }
  return {violations == 0, fmt("%d cases, %d violations", n, violations)};
}

Outcome alignment_consistency() {
  testgen::Gen g(0xacc4);
  const int n = 1000;
  int bad_ops = 0, bad_rows = 0, rows_checked = 0;
  std::vector<LinePair> pairs;
  for (int k = 0; k < n; ++k) {
    const auto ref = g.scalars(20, kAcceptanceAlphabet);
    const auto hyp = g.coin(0.7) ? g.perturb(ref, 6, kAcceptanceAlphabet) : g.scalars(20, kAcceptanceAlphabet);
    const auto ops = align(ref, hyp);
    std::u32string r, h;
    std::size_t errors = 0;
    for (const auto& op : ops) {
      if (op.ref_char) r += *op.ref_char;
      if (op.hyp_char) h += *op.hyp_char;
      errors += op.kind != EditKind::Match;
    }
    bad_ops += r != ref || h != hyp || errors != brute_force_distance(ref, hyp);
    pairs.push_back(testenv::pair(unicode::to_utf8(ref), unicode::to_utf8(hyp)));
  }
  for (std::size_t chunk = 0; chunk < pairs.size(); chunk += 50) {
    const std::vector<LinePair> part(pairs.begin() + chunk, pairs.begin() + std::min(pairs.size(), chunk + 50));
    for (const auto& row : tabulate_errors(part, 100000)) {
      if (unicode::scalar_count(row.segment.ref_str) != 1) continue;
      ++rows_checked;
      bad_rows += !(row.n_m && row.n_c && row.n_e <= *row.n_m && *row.n_m <= *row.n_c);
    }
  }
  return {bad_ops == 0 && bad_rows == 0 && rows_checked > 0,
          fmt("%d pairs, %d alignment violations; %d single-char rows, %d ordering violations", n, bad_ops,
              rows_checked, bad_rows)};
}

Outcome selection() {
  const std::map<std::string, MetricValues> rows{
      {"GT-Sámi", MetricValues::make(1.28, 4.34, {})},
      {"GT-Sámi + GT-Nor", MetricValues::make(1.31, 4.35, {})},
      {"GT-Sámi + Pred-Sámi", MetricValues::make(1.48, 4.02, {})},
      {"GT-Sámi + GT-Nor + Pred-Sámi", MetricValues::make(1.07, 3.58, {})},
  };
  const auto start = Clock::now();
  const std::string best = select_best(rows);
  const double ms = seconds_since(start) * 1000;
  const double mean = rows.at(best).mean_cer_wer;
  return {best == "GT-Sámi + GT-Nor + Pred-Sámi" && std::abs(mean - 2.325) < 1e-12 && ms < 1.0,
          fmt("selected \"%s\" with mean %.3f in %.4f ms", best.c_str(), mean, ms)};
}

Outcome improvement_factor_range() {
  auto report = [](std::string name, double cer, double wer) {
    EvalReport r;
    r.model_name = std::move(name);
    r.groups[kOverallGroup] = MetricValues::make(cer / 100, wer / 100, {});
    r.pair_count = 1;
    return r;
  };
  Comparison c;
  c.reports = {report("Transkribus", 0.61, 3.19), report("Tesseract", 0.89, 4.65), report("TrOCR", 0.74, 2.96),
               report("Baseline", 3.38, 18.71)};
  c.baseline_name = "Baseline";
  const double lo = 3.8 - 0.05, hi = 5.6 + 0.05;
  std::ostringstream detail;
  bool ok = true;
  for (const auto& [key, factor] : improvement_factors(c)) {
    const bool inside = factor >= lo && factor <= hi;
    ok &= inside;
    detail << key.first << ' ' << to_string(key.second) << ' ' << fmt("%.3f", factor) << (inside ? "" : " (outside)")
           << "; ";
  }
  detail << fmt("required range [%.2f, %.2f]", lo, hi);
  return {ok, detail.str()};
}

synth::SynthConfig font_config() {
  synth::SynthConfig cfg;
  cfg.fonts = {testenv::font("DejaVuSans.ttf"), testenv::font("DejaVuSerif.ttf"),
               testenv::font("DejaVuSansMono.ttf")};
  return cfg;
}

std::vector<std::string> sample_lines(std::size_t n) {
  static const std::vector<std::string> words{"Sámi", "girji", "boađe", "deike", "čállit", "šaddat", "ŋ",
                                              "ja",   "ž",     "Áhkku", "lea",   "ruovttus", "åarjelsaemien",
                                              "gïele", "Daate", "ïedtjem", "gåessie", "tjaelije", "Ŧ", "ođđa"};
  testgen::Gen g(0x11e5);
  std::vector<std::string> lines;
  for (std::size_t k = 0; k < n; ++k) {
    std::string line;
    for (std::size_t w = 0, count = g.size(1, 6); w < count; ++w) {
      if (w) line += ' ';
      line += words[g.size(0, words.size() - 1)];
    }
    lines.push_back(line + " " + std::to_string(k));
  }
  return lines;
}

std::uint64_t hash_directory(const std::filesystem::path& dir, std::size_t& files) {
  std::vector<std::filesystem::path> paths;
  for (const auto& e : std::filesystem::directory_iterator(dir)) paths.push_back(e.path());
  std::sort(paths.begin(), paths.end());
  std::uint64_t h = synth::fnv1a64("");
  for (const auto& p : paths) {
    h = synth::fnv1a64(p.filename().string(), h);
    h = synth::fnv1a64(testenv::slurp(p), h);
  }
  files = paths.size();
  return h;
}

Outcome synthetic_determinism() {
  const auto start = Clock::now();
  testenv::TempDir dir;
  auto cfg = font_config();
  cfg.seed = 2024;
  const auto lines = sample_lines(220);
  cfg.output_dir = dir / "first";
  const auto a = synth::generate_dataset(lines, cfg, 1);
  cfg.output_dir = dir / "second";
  const auto b = synth::generate_dataset(lines, cfg, std::max(2u, std::thread::hardware_concurrency()));
  std::size_t files_a = 0, files_b = 0;
  const auto ha = hash_directory(dir / "first", files_a);
  const auto hb = hash_directory(dir / "second", files_b);
  const double t = seconds_since(start);
  return {ha == hb && files_a == files_b && a.written >= 200 && t < 60.0,
          fmt("%zu lines, %zu images per run, %zu files hashed, digests %016llx / %016llx, %.1f s (limit 60 s)",
              lines.size(), a.written, files_a, static_cast<unsigned long long>(ha),
              static_cast<unsigned long long>(hb), t)};
}

// Smallest k with P(X <= k) >= q for X ~ Binomial(n, p).
std::size_t binomial_quantile(std::size_t n, double p, double q) {
  double cdf = 0;
  for (std::size_t k = 0; k <= n; ++k) {
    const double log_pmf = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
                           k * std::log(p) + (n - k) * std::log1p(-p);
    cdf += std::exp(log_pmf);
    if (cdf >= q) return k;
  }
  return n;
}

Outcome uppercase_sampling() {
  auto cfg = font_config();
  cfg.uppercase_prob = 0.10;
  const std::size_t n = 10000;
  std::vector<std::string> lines;
  for (std::size_t k = 0; k < n; ++k) lines.push_back("linje " + std::to_string(k));
  std::size_t twins = 0;
  for (const auto& planned : synth::plan_dataset(lines, cfg)) twins += planned.uppercase_twin;
  const std::size_t lo = binomial_quantile(n, 0.10, 0.005), hi = binomial_quantile(n, 0.10, 0.995);
  return {twins >= lo && twins <= hi, fmt("%zu extra pairs over %zu lines; 99%% interval [%zu, %zu]", twins, n, lo, hi)};
}

Outcome alto_fixture() {
  const auto dir = std::filesystem::path(OCREVAL_FIXTURES) / "alto";
  std::vector<std::string> problems;
  const auto lines = parse_alto(dir / "two_pages.xml");
  const std::vector<std::string> texts{"Sámi girji", "boađe gir-", "čállit šaddat", "åarjelsaemien gïele", "ŋ ja ž",
                                       "Áhkku"};
  const std::vector<std::optional<BBox>> boxes{BBox{100, 200, 800, 40}, BBox{100, 250, 800, 40},
                                               BBox{100.5, 300, 640.25, 38}, BBox{90, 180, 700, 42},
                                               std::nullopt, std::nullopt};
  if (lines.size() != texts.size()) problems.push_back(fmt("%zu lines", lines.size()));
  for (std::size_t k = 0; k < std::min(lines.size(), texts.size()); ++k) {
    if (lines[k].text != texts[k]) problems.push_back("text " + std::to_string(k));
    if (lines[k].bbox != boxes[k]) problems.push_back("bbox " + std::to_string(k));
    if (lines[k].line_index != k % 3) problems.push_back("line_index " + std::to_string(k));
  }
  std::string error_detail = "no error";
  try {
    parse_alto(dir / "malformed.xml");
  } catch (const ParseError& e) {
    error_detail = e.what();
    if (e.line() != 7) problems.push_back("error line " + std::to_string(e.line()));
  }
  if (error_detail == "no error") problems.push_back("malformed file accepted");
  std::string joined;
  for (const auto& p : problems) joined += (joined.empty() ? "" : ", ") + p;
  return {problems.empty(), fmt("%zu lines parsed; malformed: %s%s%s", lines.size(), error_detail.c_str(),
                                joined.empty() ? "" : "; problems: ", joined.c_str())};
}

Outcome end_to_end() {
  testenv::TempDir dir;
  dir.write("synth.toml", "fonts = [\"" + testenv::font("DejaVuSans.ttf").string() + "\", \"" +
                              testenv::font("DejaVuSerif.ttf").string() + "\"]\nseed = 11\nuppercase_prob = 0.2\n");
  std::string corpus;
  for (const auto& line : sample_lines(40)) corpus += line + "\n";
  dir.write("corpus.txt", corpus);
  std::ostringstream out, err;
  const int synth_code = cli::run({"synth", "--config", (dir / "synth.toml").string(), "--input",
                                   (dir / "corpus.txt").string(), "--out", (dir / "data").string(), "--jobs", "2"},
                                  out, err);
  if (synth_code != cli::kExitOk) return {false, "synth exit " + std::to_string(synth_code) + ": " + err.str()};
  std::ostringstream eval_out, eval_err;
  const int eval_code = cli::run({"eval", "--gt", (dir / "data").string(), "--hyp", (dir / "data").string(),
                                  "--charset", "all-sami-special", "--format", "json"},
                                 eval_out, eval_err);
  if (eval_code != cli::kExitOk) return {false, "eval exit " + std::to_string(eval_code) + ": " + eval_err.str()};
  const auto report = report_from_json(nlohmann::json::parse(eval_out.str()));
  const auto& v = report.overall();
  const bool f1_ok = !v.f1 || *v.f1 == 1.0;
  return {v.cer == 0 && v.wer == 0 && f1_ok,
          fmt("%zu pairs; CER %g, WER %g, F1 %s; exit codes %d/%d", report.pair_count, v.cer, v.wer,
              v.f1 ? fmt("%g", *v.f1).c_str() : "undefined", synth_code, eval_code)};
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "edit distance equals brute-force DP", edit_distance_oracle},
      {2, "bundled metric fixture reproduces hand-computed values", metric_fixture},
      {3, "F1 count identities on random pairs", f1_formula},
      {4, "alignment consistency and n_e <= n_m <= n_c", alignment_consistency},
      {5, "selection picks the all-datasets validation row", selection},
      {6, "improvement factors lie within [3.8, 5.6] +/- 0.05", improvement_factor_range},
      {7, "synthetic generation is byte-identical across runs", synthetic_determinism},
      {8, "uppercase pairs within binomial 99% interval", uppercase_sampling},
      {9, "ALTO fixture parses exactly; malformed file gives a positioned error", alto_fixture},
      {10, "synth output evaluated against itself is error-free", end_to_end},
  };
  std::vector<int> selected;
  for (int k = 1; k < argc; ++k) selected.push_back(std::stoi(argv[k]));
  int failed = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.title << " | " << o.detail
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}

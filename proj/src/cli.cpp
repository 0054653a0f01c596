// SPDX-License-Identifier: Apache-2.0
#include "ocreval/cli.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <exception>
#include <iostream>
#include <optional>
#include <set>
#include <stdexcept>

#include "CLI11.hpp"
#include "io.hpp"
#include "ocreval/align.hpp"
#include "ocreval/corpus.hpp"
#include "ocreval/metrics.hpp"
#include "ocreval/report.hpp"
#include "ocreval/synth.hpp"

namespace fs = std::filesystem;

namespace ocreval::cli {
namespace {

struct Options {
  // shared
  std::string gt;
  std::string hyp;
  std::string match_policy = "auto";
  std::string charset = "all-sami-special";
  std::optional<std::string> lang_field;
  std::size_t top_n = kDefaultTopN;
  std::string format;
  std::string out;
  std::string model = "hyp";
  std::string lang = "mixed";
  std::string split;
  unsigned jobs = 1;
  bool stamp = false;
  // ingest-alto
  std::vector<std::string> alto_files;
  bool drop_hyphenation = false;
  // synth
  std::string config;
  std::vector<std::string> inputs;
  std::optional<std::uint64_t> seed;
  std::size_t max_len = 200;
  // select / report
  std::vector<std::string> reports;
  std::string baseline;
  int verbosity = 0;
};

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  ocreval::detail::write_file(o.out, text);
}

bool has_suffix_files(const fs::path& dir, std::string_view suffix) {
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && ocreval::detail::ends_with(entry.path().filename().string(), suffix)) {
      return true;
    }
  }
  return false;
}

std::vector<TranscribedLine> load_alto_dir(const fs::path& dir, const AltoOptions& opts, Diagnostics& diag) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".xml") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<TranscribedLine> lines;
  for (const auto& f : files) {
    auto part = parse_alto(f, opts, &diag);
    lines.insert(lines.end(), part.begin(), part.end());
  }
  return lines;
}

// A directory of `.gt.txt`/`.txt` files, a directory of ALTO files, a single
// ALTO file, or a manifest.
std::vector<TranscribedLine> load_lines(const std::string& spec, bool hypothesis, const Options& o,
                                        Diagnostics& diag) {
  const fs::path path(spec);
  if (!fs::exists(path)) throw DataError("no such file or directory: " + spec);
  AltoOptions alto;
  alto.language = o.lang;
  alto.split = hypothesis ? Split::Pred : Split::GT;
  if (fs::is_directory(path)) {
    if (has_suffix_files(path, ".gt.txt") || (hypothesis && has_suffix_files(path, ".txt"))) {
      std::vector<TranscribedLine> lines;
      if (hypothesis) {
        lines = load_hypothesis_dir(path, &diag);
      } else {
        GtLoadOptions gt;
        gt.language = o.lang;
        lines = load_gt_pairs(path, gt, &diag);
      }
      if (!o.split.empty() && !hypothesis) {
        for (auto& l : lines) l.split = parse_split(o.split);
      }
      if (!hypothesis) {
        for (auto& l : lines) l.language = o.lang;
      }
      return lines;
    }
    if (fs::exists(path / synth::kManifestFileName)) return read_manifest(path / synth::kManifestFileName).entries;
    if (has_suffix_files(path, ".xml")) return load_alto_dir(path, alto, diag);
    throw DataError("no transcriptions found in " + spec);
  }
  if (path.extension() == ".jsonl") return read_manifest(path).entries;
  if (path.extension() == ".xml") return parse_alto(path, alto, &diag);
  throw DataError("unsupported input " + spec + " (expected a directory, .jsonl or .xml)");
}

std::string stem_prefix_language(const std::string& id) {
  std::string base = fs::path(id).filename().string();
  const auto cut = base.find_first_of("_-.");
  return cut == std::string::npos ? base : base.substr(0, cut);
}

std::vector<LinePair> load_pairs(const Options& o, std::ostream& err) {
  Diagnostics diag;
  auto gt = load_lines(o.gt, false, o, diag);
  auto hyp = load_lines(o.hyp, true, o, diag);
  for (const auto& w : diag.warnings) err << "warning: " << w << '\n';
  if (gt.empty()) throw DataError("no ground-truth lines in " + o.gt);

  if (o.lang_field == "stem-prefix") {
    for (auto& line : gt) line.language = stem_prefix_language(line.id);
  }
  const MatchPolicy policy =
      o.match_policy == "auto" ? choose_match_policy(gt, hyp) : parse_match_policy(o.match_policy);
  MatchResult matched = match_hypotheses(gt, hyp, policy, o.model);
  if (o.verbosity > 0) err << "matched " << matched.pairs.size() << " lines by " << to_string(policy) << '\n';
  if (!matched.unmatched_gt.empty()) {
    err << "warning: " << matched.unmatched_gt.size() << " ground-truth lines without a hypothesis\n";
    if (o.verbosity > 0) {
      for (const auto& l : matched.unmatched_gt) err << "  unmatched gt: " << l.id << '\n';
    }
  }
  if (!matched.unmatched_hyp.empty()) {
    err << "warning: " << matched.unmatched_hyp.size() << " hypothesis lines without ground truth\n";
    if (o.verbosity > 0) {
      for (const auto& l : matched.unmatched_hyp) err << "  unmatched hyp: " << l.id << '\n';
    }
  }
  if (matched.pairs.empty()) throw DataError("no ground-truth line could be matched to a hypothesis");
  return std::move(matched.pairs);
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string render(const Comparison& c, const std::string& format) {
  if (format == "md") return emit_markdown(c);
  if (format == "csv") return emit_csv(c);
  return emit_json(c);
}

int cmd_eval(const Options& o, std::ostream& out, std::ostream& err) {
  const auto pairs = load_pairs(o, err);
  const CharacterSet cs = resolve_character_set(o.charset);
  EvaluateOptions eo;
  eo.model_name = o.model;
  eo.jobs = o.jobs;
  EvalReport report = evaluate(pairs, cs, o.lang_field.has_value(), eo);
  report.error_table = tabulate_errors(pairs, o.top_n, o.jobs);
  if (o.stamp) report.created = utc_now();
  Comparison c;
  c.reports.push_back(std::move(report));
  if (o.format == "json") {
    emit(o, to_json(c.reports.front()).dump(2) + "\n", out);
  } else {
    emit(o, render(c, o.format), out);
  }
  return kExitOk;
}

int cmd_errors(const Options& o, std::ostream& out, std::ostream& err) {
  const auto pairs = load_pairs(o, err);
  const auto rows = tabulate_errors(pairs, o.top_n, o.jobs);
  if (o.format == "csv") {
    emit(o, error_table_csv(rows), out);
  } else if (o.format == "json") {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
      nlohmann::ordered_json row;
      row["ref"] = r.segment.ref_str;
      row["hyp"] = r.segment.hyp_str;
      row["n_e"] = r.n_e;
      row["n_m"] = r.n_m ? nlohmann::ordered_json(*r.n_m) : nlohmann::ordered_json();
      row["n_c"] = r.n_c ? nlohmann::ordered_json(*r.n_c) : nlohmann::ordered_json();
      j.push_back(std::move(row));
    }
    emit(o, j.dump(2) + "\n", out);
  } else {
    emit(o, error_table_markdown(rows), out);
  }
  return kExitOk;
}

int cmd_ingest(const Options& o, std::ostream& out, std::ostream& err) {
  AltoOptions alto;
  alto.language = o.lang;
  alto.keep_hyphenation = !o.drop_hyphenation;
  alto.split = o.split.empty() ? Split::GT : parse_split(o.split);
  Diagnostics diag;
  DatasetManifest manifest;
  std::set<std::string> seen;
  for (const auto& file : o.alto_files) {
    auto lines = fs::is_directory(file) ? load_alto_dir(file, alto, diag) : parse_alto(file, alto, &diag);
    for (auto& l : lines) {
      if (!seen.insert(l.id).second) throw DataError("duplicate line id " + l.id + " from " + file);
      manifest.entries.push_back(std::move(l));
    }
  }
  for (const auto& w : diag.warnings) err << "warning: " << w << '\n';
  manifest.metadata["source"] = "alto";
  manifest.metadata["files"] = std::to_string(o.alto_files.size());
  validate(manifest);
  emit(o, manifest_to_string(manifest), out);
  return kExitOk;
}

int cmd_synth(const Options& o, std::ostream& out, std::ostream& err) {
  synth::SynthConfig cfg = synth::load_config(o.config);
  if (o.seed) cfg.seed = *o.seed;
  if (!o.out.empty()) cfg.output_dir = o.out;
  if (o.lang != "mixed") cfg.language = o.lang;
  std::vector<fs::path> inputs(o.inputs.begin(), o.inputs.end());
  const auto corpus = synth::load_corpus_lines(inputs, o.max_len);
  if (corpus.too_long || corpus.duplicates || corpus.empty) {
    err << "input: " << corpus.lines.size() << " lines kept, " << corpus.too_long << " too long, "
        << corpus.duplicates << " duplicates, " << corpus.empty << " empty\n";
  }
  const auto summary = synth::generate_dataset(corpus.lines, cfg, o.jobs);
  for (const auto& s : summary.skipped) err << "skipped " << s.stem << ": " << s.reason << '\n';
  auto j = summary.to_json();
  j["output_dir"] = cfg.output_dir.string();
  j["too_long"] = corpus.too_long;
  j["duplicates"] = corpus.duplicates;
  out << j.dump(2) << '\n';
  return kExitOk;
}

Comparison gather(const std::vector<std::string>& files) {
  Comparison all;
  for (const auto& f : files) {
    Comparison c = read_comparison(f);
    for (auto& r : c.reports) all.reports.push_back(std::move(r));
  }
  return all;
}

int cmd_select(const Options& o, std::ostream& out, std::ostream&) {
  Comparison c = gather(o.reports);
  c.validate();
  std::map<std::string, MetricValues> candidates;
  for (const auto& r : c.reports) candidates.emplace(r.model_name, r.overall());
  out << select_best(candidates) << '\n';
  return kExitOk;
}

int cmd_report(const Options& o, std::ostream& out, std::ostream&) {
  Comparison c = gather(o.reports);
  if (!o.baseline.empty()) c.baseline_name = o.baseline;
  c.validate();
  emit(o, render(c, o.format), out);
  return kExitOk;
}

void add_pair_flags(CLI::App* sub, Options& o) {
  sub->add_option("--gt", o.gt, "Ground truth: tesstrain directory, ALTO file/directory or manifest")->required();
  sub->add_option("--hyp", o.hyp, "Hypotheses: directory of .txt/.gt.txt, ALTO file/directory or manifest")
      ->required();
  sub->add_option("--match-policy", o.match_policy, "Line matching: auto, bbox_iou, order or id")
      ->check(CLI::IsMember({"auto", "bbox_iou", "order", "id"}))
      ->capture_default_str();
  sub->add_option("--lang-field", o.lang_field,
                  "Group by language taken from the line's language field or its id prefix")
      ->check(CLI::IsMember({"language", "stem-prefix"}));
  sub->add_option("--lang", o.lang, "Language code assigned to loaded lines")->capture_default_str();
  sub->add_option("--top-n", o.top_n, "Rows in the error table")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--out", o.out, "Write the result to this file instead of standard output");
  sub->add_option("--model", o.model, "Model name used in the report")->capture_default_str();
  sub->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"OCR evaluation and synthetic line generation", "ocreval"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  auto* ingest = app.add_subcommand("ingest-alto", "Convert ALTO-XML files into a line manifest");
  ingest->add_option("files", o.alto_files, "ALTO files or directories")->required();
  ingest->add_option("--lang", o.lang, "Language code")->capture_default_str();
  ingest->add_option("--split", o.split, "Split tag (gt, val, test, ood, ...)");
  ingest->add_flag("--drop-hyphenation", o.drop_hyphenation, "Ignore HYP elements");
  ingest->add_option("--out", o.out, "Manifest path (default: standard output)");

  auto* eval = app.add_subcommand("eval", "Compute CER, WER and special-character F1");
  add_pair_flags(eval, o);
  eval->add_option("--charset", o.charset, "Built-in set name, file, or file#name")->capture_default_str();
  eval->add_option("--format", o.format, "md, csv or json")
      ->check(CLI::IsMember({"md", "csv", "json"}))
      ->default_str("json");
  eval->add_flag("--stamp", o.stamp, "Record the creation time in the report");
  eval->add_flag("-v,--verbose", o.verbosity, "More diagnostics");

  auto* errors = app.add_subcommand("errors", "Most frequent error segments");
  add_pair_flags(errors, o);
  errors->add_option("--format", o.format, "md, csv or json")
      ->check(CLI::IsMember({"md", "csv", "json"}))
      ->default_str("md");
  errors->add_flag("-v,--verbose", o.verbosity, "More diagnostics");

  auto* synth_cmd = app.add_subcommand("synth", "Render a synthetic line dataset");
  synth_cmd->add_option("--config", o.config, "Generator configuration (TOML)")->required();
  synth_cmd->add_option("--input", o.inputs, "Text files, one line per sample")->required();
  synth_cmd->add_option("--seed", o.seed, "Override the configured seed");
  synth_cmd->add_option("--out", o.out, "Override the configured output directory");
  synth_cmd->add_option("--lang", o.lang, "Override the configured language");
  synth_cmd->add_option("--max-len", o.max_len, "Longest accepted line in scalars")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth_cmd->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();

  auto* select = app.add_subcommand("select", "Print the model with the lowest mean of CER and WER");
  select->add_option("--reports", o.reports, "JSON reports")->required();

  auto* report = app.add_subcommand("report", "Combine JSON reports into one comparison");
  report->add_option("--reports", o.reports, "JSON reports")->required();
  report->add_option("--baseline", o.baseline, "Model to compare against");
  report->add_option("--format", o.format, "md, csv or json")
      ->check(CLI::IsMember({"md", "csv", "json"}))
      ->default_str("md");
  report->add_option("--out", o.out, "Write the result to this file instead of standard output");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  }
  if (o.format.empty()) o.format = eval->parsed() ? "json" : "md";

  try {
    if (ingest->parsed()) return cmd_ingest(o, out, err);
    if (eval->parsed()) return cmd_eval(o, out, err);
    if (errors->parsed()) return cmd_errors(o, out, err);
    if (synth_cmd->parsed()) return cmd_synth(o, out, err);
    if (select->parsed()) return cmd_select(o, out, err);
    if (report->parsed()) return cmd_report(o, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace ocreval::cli

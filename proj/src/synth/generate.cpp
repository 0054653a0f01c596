// SPDX-License-Identifier: Apache-2.0
#include <charconv>
#include <cstdio>
#include <map>
#include <set>

#include "../io.hpp"
#include "ocreval/parallel.hpp"
#include "ocreval/synth.hpp"
#include "ocreval/unicode.hpp"

namespace fs = std::filesystem;

namespace ocreval::synth {

CorpusLines load_corpus_lines(const std::vector<fs::path>& files, std::size_t max_len) {
  CorpusLines out;
  std::set<std::string> seen;
  for (const auto& file : files) {
    const std::string raw = ocreval::detail::read_file(file);
    if (!unicode::is_valid_utf8(raw)) throw DataError("not valid UTF-8: " + file.string());
    const std::u32string text = unicode::to_scalars(raw);
    std::vector<std::u32string_view> segments;
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (!unicode::is_line_break(text[i])) continue;
      segments.push_back(std::u32string_view(text).substr(start, i - start));
      if (text[i] == U'\r' && i + 1 < text.size() && text[i + 1] == U'\n') ++i;
      start = i + 1;
    }
    if (start < text.size()) segments.push_back(std::u32string_view(text).substr(start));
    for (const auto segment : segments) {
      const std::string line = unicode::nfc(unicode::trim(unicode::to_utf8(segment)));
      if (line.empty()) {
        ++out.empty;
        continue;
      }
      if (unicode::scalar_count(line) > max_len) {
        ++out.too_long;
        continue;
      }
      if (!seen.insert(line).second) {
        ++out.duplicates;
        continue;
      }
      out.lines.push_back(line);
    }
  }
  return out;
}

std::vector<PlannedLine> plan_dataset(const std::vector<std::string>& lines, const SynthConfig& config) {
  std::vector<PlannedLine> plan;
  plan.reserve(lines.size() + lines.size() / 8);
  std::map<std::string, std::size_t> occurrences;
  const int digits = std::max<int>(6, static_cast<int>(std::to_string(lines.size()).size()));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string text = unicode::nfc(lines[i]);
    const std::uint64_t seed = line_seed(config.seed, text, occurrences[text]++);
    std::string index = std::to_string(i);
    index.insert(0, static_cast<std::size_t>(std::max(0, digits - static_cast<int>(index.size()))), '0');
    const std::string stem = config.stem_prefix + "_" + index;
    plan.push_back({stem, text, seed, i, false});
    if (wants_uppercase(seed, config.uppercase_prob)) {
      plan.push_back({stem + "_upper", unicode::to_upper(text), uppercase_seed(seed), i, true});
    }
  }
  return plan;
}

nlohmann::ordered_json GenerationSummary::to_json() const {
  nlohmann::ordered_json j;
  j["input_lines"] = input_lines;
  j["uppercase_pairs"] = uppercase_pairs;
  j["written"] = written;
  j["skipped"] = skipped.size();
  j["skipped_lines"] = nlohmann::ordered_json::array();
  for (const auto& s : skipped) {
    j["skipped_lines"].push_back({{"stem", s.stem}, {"text", s.text}, {"reason", s.reason}});
  }
  return j;
}

namespace {

struct Outcome {
  bool written = false;
  std::string reason;
};

Outcome produce(LineRenderer& renderer, const PlannedLine& planned, const SynthConfig& cfg) {
  RenderParams params = sample_render_params(cfg, planned.seed);
  const std::size_t first_font = params.font_index;
  std::optional<RenderedLine> rendered;
  std::string reason;
  // Missing glyphs: fall through the remaining fonts in config order.
  for (std::size_t k = 0; k < cfg.fonts.size() && !rendered; ++k) {
    params.font_index = (first_font + k) % cfg.fonts.size();
    try {
      rendered = renderer.render(planned.text, params);
    } catch (const MissingGlyphError& e) {
      reason = e.what();
    }
  }
  if (!rendered) return {false, "no font covers the line; last error: " + reason};

  const Image image = degrade(rendered->image, cfg.degradations, mix64(planned.seed ^ 0x4445475241444fULL));
  const auto png = encode_png(image);
  ocreval::detail::write_file(cfg.output_dir / (planned.stem + ".png"),
                              std::string_view(reinterpret_cast<const char*>(png.data()), png.size()));
  ocreval::detail::write_file(cfg.output_dir / (planned.stem + ".gt.txt"), planned.text + "\n");
  return {true, {}};
}

std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

GenerationSummary generate_dataset(const std::vector<std::string>& lines, const SynthConfig& config,
                                   unsigned jobs) {
  config.validate();
  if (lines.empty()) throw DataError("generate_dataset: no input lines");
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec || !fs::is_directory(config.output_dir)) {
    throw DataError("cannot create output directory " + config.output_dir.string());
  }

  const auto plan = plan_dataset(lines, config);
  std::vector<Outcome> outcomes(plan.size());
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(plan.size())));
  parallel_for(workers, workers, [&](std::size_t w) {
    LineRenderer renderer(config);
    for (std::size_t i = w; i < plan.size(); i += workers) {
      try {
        outcomes[i] = produce(renderer, plan[i], config);
      } catch (const MissingGlyphError& e) {
        outcomes[i] = {false, e.what()};
      } catch (const DataError& e) {
        // Unwritable output is fatal; per-line render problems are not.
        if (std::string_view(e.what()).starts_with("cannot write") ||
            std::string_view(e.what()).starts_with("write failed")) {
          throw;
        }
        outcomes[i] = {false, e.what()};
      }
    }
  });

  GenerationSummary summary;
  summary.input_lines = lines.size();
  DatasetManifest& manifest = summary.manifest;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const PlannedLine& planned = plan[i];
    if (!outcomes[i].written) {
      summary.skipped.push_back({planned.stem, planned.text, outcomes[i].reason});
      continue;
    }
    ++summary.written;
    if (planned.uppercase_twin) ++summary.uppercase_pairs;
    TranscribedLine entry;
    entry.id = planned.stem;
    entry.text = planned.text;
    entry.language = config.language;
    entry.split = Split::Synth;
    entry.image_path = fs::path(planned.stem + ".png");
    entry.line_index = manifest.entries.size();
    manifest.entries.push_back(std::move(entry));
  }
  std::string font_names;
  for (const auto& font : config.fonts) {
    if (!font_names.empty()) font_names += ';';
    font_names += font.filename().string();
  }
  manifest.metadata = {
      {"generator", "ocreval synth"},
      {"seed", std::to_string(config.seed)},
      {"uppercase_prob", shortest(config.uppercase_prob)},
      {"fonts", font_names},
      {"input_lines", std::to_string(lines.size())},
      {"skipped", std::to_string(summary.skipped.size())},
  };
  write_manifest(manifest, config.output_dir / kManifestFileName);
  return summary;
}

}  // namespace ocreval::synth

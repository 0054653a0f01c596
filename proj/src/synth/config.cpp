// SPDX-License-Identifier: Apache-2.0
#include <array>
#include <cmath>

#include "ocreval/error.hpp"
#include "ocreval/kv_config.hpp"
#include "ocreval/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace ocreval::synth {

namespace {

constexpr std::array<std::pair<DegradationKind, std::string_view>, 6> kKindNames{{
    {DegradationKind::GaussianNoise, "gaussian_noise"},
    {DegradationKind::Blur, "blur"},
    {DegradationKind::Rotate, "rotate"},
    {DegradationKind::JpegArtifact, "jpeg"},
    {DegradationKind::BleedThrough, "bleed_through"},
    {DegradationKind::SaltPepper, "salt_pepper"},
}};

// Admissible parameter bounds per kind.
Range parameter_bounds(DegradationKind kind) {
  switch (kind) {
    case DegradationKind::GaussianNoise:
      return {0, 128};
    case DegradationKind::Blur:
      return {0, 10};
    case DegradationKind::Rotate:
      return {-kMaxRotationDegrees, kMaxRotationDegrees};
    case DegradationKind::JpegArtifact:
      return {1, 100};
    case DegradationKind::BleedThrough:
      return {0, 1};
    case DegradationKind::SaltPepper:
      return {0, 1};
  }
  return {0, 0};
}

std::string context(const std::string& key) { return "synth config: '" + key + "'"; }

double get_number(const ordered_json& j, const std::string& key) {
  if (!j.is_number()) throw DataError(context(key) + " must be a number");
  return j.get<double>();
}

long long get_integer(const ordered_json& j, const std::string& key) {
  if (!j.is_number_integer()) throw DataError(context(key) + " must be an integer");
  return j.get<long long>();
}

std::string get_string(const ordered_json& j, const std::string& key) {
  if (!j.is_string()) throw DataError(context(key) + " must be a string");
  return j.get<std::string>();
}

Range get_range(const ordered_json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 2) throw DataError(context(key) + " must be a [min, max] pair");
  return Range{get_number(j[0], key), get_number(j[1], key)};
}

std::vector<Rgb> get_colors(const ordered_json& j, const std::string& key) {
  if (!j.is_array()) throw DataError(context(key) + " must be a list of [r, g, b] triples");
  std::vector<Rgb> colors;
  for (const auto& c : j) {
    if (!c.is_array() || c.size() != 3) throw DataError(context(key) + " entries must be [r, g, b]");
    std::array<std::uint8_t, 3> rgb{};
    for (std::size_t k = 0; k < 3; ++k) {
      const long long v = get_integer(c[k], key);
      if (v < 0 || v > 255) throw DataError(context(key) + " components must be in 0..255");
      rgb[k] = static_cast<std::uint8_t>(v);
    }
    colors.push_back({rgb[0], rgb[1], rgb[2]});
  }
  return colors;
}

}  // namespace

std::string_view to_string(DegradationKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "gaussian_noise";
}

DegradationKind parse_degradation_kind(std::string_view name) {
  for (const auto& [k, known] : kKindNames) {
    if (known == name) return k;
  }
  throw DataError("unknown degradation kind: " + std::string(name));
}

void DegradationSpec::validate() const {
  const std::string name(to_string(kind));
  if (!(probability >= 0 && probability <= 1)) {
    throw DataError("degradation " + name + ": probability must be in [0, 1]");
  }
  const Range bounds = parameter_bounds(kind);
  if (!(range.lo <= range.hi) || range.lo < bounds.lo || range.hi > bounds.hi) {
    throw DataError("degradation " + name + ": parameter range must satisfy " + std::to_string(bounds.lo) +
                    " <= lo <= hi <= " + std::to_string(bounds.hi));
  }
}

std::vector<DegradationSpec> default_degradations() {
  return {
      {DegradationKind::Rotate, 0.5, {-2.0, 2.0}},
      {DegradationKind::Blur, 0.3, {0.0, 1.5}},
      {DegradationKind::BleedThrough, 0.1, {0.05, 0.2}},
      {DegradationKind::GaussianNoise, 0.5, {2.0, 8.0}},
      {DegradationKind::SaltPepper, 0.1, {0.0005, 0.003}},
      {DegradationKind::JpegArtifact, 0.3, {30.0, 80.0}},
  };
}

void SynthConfig::validate() const {
  if (fonts.empty()) throw DataError("synth config: at least one font is required");
  for (const auto& font : fonts) {
    if (!fs::is_regular_file(font)) throw DataError("synth config: font not found: " + font.string());
  }
  if (min_font_px < 6) throw DataError("synth config: minimum font size must be at least 6");
  if (max_font_px < min_font_px) throw DataError("synth config: font size range is empty");
  if (padding_px < 0) throw DataError("synth config: padding must be non-negative");
  if (fg_colors.empty() || bg_colors.empty()) throw DataError("synth config: colour lists must be non-empty");
  bool any_pair = false;
  for (const auto& fg : fg_colors) {
    for (const auto& bg : bg_colors) {
      if (std::abs(fg.luminance() - bg.luminance()) >= min_contrast) any_pair = true;
    }
  }
  if (!any_pair) throw DataError("synth config: no foreground/background pair meets the contrast floor");
  if (!(uppercase_prob >= 0 && uppercase_prob <= 1)) {
    throw DataError("synth config: uppercase_prob must be in [0, 1]");
  }
  for (const auto& d : degradations) d.validate();
  if (stem_prefix.empty() || stem_prefix.find_first_of("/\\") != std::string::npos) {
    throw DataError("synth config: stem_prefix must be a non-empty file name component");
  }
}

SynthConfig config_from_json(const ordered_json& doc) {
  SynthConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    if (key == "fonts") {
      if (!value.is_array()) throw DataError(context(key) + " must be a list of paths");
      cfg.fonts.clear();
      for (const auto& f : value) cfg.fonts.emplace_back(get_string(f, key));
    } else if (key == "font_size") {
      const Range r = get_range(value, key);
      cfg.min_font_px = static_cast<int>(r.lo);
      cfg.max_font_px = static_cast<int>(r.hi);
      if (r.lo != std::floor(r.lo) || r.hi != std::floor(r.hi)) {
        throw DataError(context(key) + " must hold integers");
      }
    } else if (key == "padding_px") {
      cfg.padding_px = static_cast<int>(get_integer(value, key));
    } else if (key == "fg_colors") {
      cfg.fg_colors = get_colors(value, key);
    } else if (key == "bg_colors") {
      cfg.bg_colors = get_colors(value, key);
    } else if (key == "min_contrast") {
      cfg.min_contrast = get_number(value, key);
    } else if (key == "uppercase_prob") {
      cfg.uppercase_prob = get_number(value, key);
    } else if (key == "seed") {
      if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<long long>() >= 0)) {
        throw DataError(context(key) + " must be a non-negative integer");
      }
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "output_dir") {
      cfg.output_dir = get_string(value, key);
    } else if (key == "language") {
      cfg.language = get_string(value, key);
    } else if (key == "stem_prefix") {
      cfg.stem_prefix = get_string(value, key);
    } else if (key == "degradation") {
      if (!value.is_array()) throw DataError(context(key) + " must be an array of tables");
      cfg.degradations.clear();
      for (const auto& d : value) {
        if (!d.is_object()) throw DataError(context(key) + " entries must be tables");
        DegradationSpec spec;
        if (!d.contains("kind")) throw DataError(context(key) + " entry without 'kind'");
        spec.kind = parse_degradation_kind(get_string(d["kind"], "kind"));
        spec.probability = d.contains("probability") ? get_number(d["probability"], "probability") : 1.0;
        if (!d.contains("range")) throw DataError(context(key) + " entry without 'range'");
        spec.range = get_range(d["range"], "range");
        for (const auto& [field, ignored] : d.items()) {
          if (field != "kind" && field != "probability" && field != "range") {
            throw DataError(context(key) + ": unknown field '" + field + "'");
          }
        }
        cfg.degradations.push_back(spec);
      }
    } else {
      throw DataError("synth config: unknown key '" + key + "'");
    }
  }
  return cfg;
}

SynthConfig load_config(const fs::path& path) {
  SynthConfig cfg = config_from_json(load_kv_config(path));
  // Relative font paths are resolved against the config file's directory.
  for (auto& font : cfg.fonts) {
    if (font.is_relative() && !fs::exists(font)) font = path.parent_path() / font;
  }
  return cfg;
}

}  // namespace ocreval::synth

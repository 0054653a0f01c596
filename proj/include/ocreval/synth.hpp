// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nlohmann/json.hpp"
#include "ocreval/corpus.hpp"
#include "ocreval/error.hpp"


namespace ocreval::synth {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  double luminance() const { return 0.299 * r + 0.587 * g + 0.114 * b; }
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

enum class DegradationKind { GaussianNoise, Blur, Rotate, JpegArtifact, BleedThrough, SaltPepper };

std::string_view to_string(DegradationKind kind);
DegradationKind parse_degradation_kind(std::string_view name);

/// Closed interval a parameter is drawn from uniformly.
struct Range {
  double lo = 0;
  double hi = 0;
  friend bool operator==(const Range&, const Range&) = default;
};

/// `range` holds the kind's parameter: noise sigma (0-255 scale), blur radius
/// (px), rotation (degrees), JPEG quality, bleed-through alpha, or salt/pepper
/// pixel density.
struct DegradationSpec {
  DegradationKind kind = DegradationKind::GaussianNoise;
  double probability = 1.0;
  Range range;

  /// Throws DataError for out-of-bounds probabilities or parameter ranges.
  void validate() const;
  friend bool operator==(const DegradationSpec&, const DegradationSpec&) = default;
};

inline constexpr double kMaxRotationDegrees = 3.0;

/// Placeholder magnitudes, not calibrated against any published pipeline.
std::vector<DegradationSpec> default_degradations();

struct SynthConfig {
  std::vector<std::filesystem::path> fonts;
  int min_font_px = 28;
  int max_font_px = 40;
  int padding_px = 8;
  std::vector<Rgb> fg_colors{{0, 0, 0}};
  std::vector<Rgb> bg_colors{{255, 255, 255}};
  double min_contrast = 50;
  double uppercase_prob = 0.10;
  std::vector<DegradationSpec> degradations = default_degradations();
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "synth-out";
  std::string language = "mixed";
  std::string stem_prefix = "synth";

  /// Throws DataError when an invariant is violated.
  void validate() const;
};

/// Builds a config from a parsed key/value document (see README for keys).
SynthConfig config_from_json(const nlohmann::ordered_json& doc);
SynthConfig load_config(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Seeds

/// Stable 64-bit FNV-1a hash.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL);
/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);
/// Per-line seed from (master seed, line text, occurrence index of that text).
std::uint64_t line_seed(std::uint64_t master, std::string_view text, std::size_t occurrence);
/// Seed for the uppercase twin of a line.
std::uint64_t uppercase_seed(std::uint64_t line_seed);
/// Uppercase decision for a line; a pure function of its seed.
bool wants_uppercase(std::uint64_t line_seed, double probability);

// ---------------------------------------------------------------------------
// Fonts

/// Character coverage of a TrueType/OpenType font, read from its cmap table.
class FontCoverage {
 public:
  static FontCoverage load(const std::filesystem::path& path);
  static FontCoverage parse(std::string_view font_bytes, std::string_view source);

  bool has_glyph(char32_t c) const;
  /// First scalar without a glyph; whitespace and format controls are ignored.
  std::optional<char32_t> first_missing(std::u32string_view text) const;

 private:
  struct Segment {
    char32_t first;
    char32_t last;
  };
  std::vector<Segment> segments_;  // sorted, merged ranges with glyph id != 0
};

class MissingGlyphError : public DataError {
 public:
  MissingGlyphError(char32_t scalar, std::filesystem::path font);
  char32_t scalar() const noexcept { return scalar_; }
  const std::filesystem::path& font() const noexcept { return font_; }

 private:
  char32_t scalar_;
  std::filesystem::path font_;
};

// ---------------------------------------------------------------------------
// Raster

/// 8-bit RGB raster, row-major, 3 bytes per pixel.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  bool empty() const { return width == 0 || height == 0; }
  std::uint8_t* at(int x, int y) { return &pixels[(static_cast<std::size_t>(y) * width + x) * 3]; }
  const std::uint8_t* at(int x, int y) const {
    return &pixels[(static_cast<std::size_t>(y) * width + x) * 3];
  }
  friend bool operator==(const Image&, const Image&) = default;
};

/// Lossless PNG bytes (fixed encoder settings, so identical images give identical bytes).
std::vector<std::uint8_t> encode_png(const Image& image);
Image decode_image(const std::vector<std::uint8_t>& bytes);

/// Fraction of pixels whose luminance differs from `background` by more than `threshold`.
double foreground_fraction(const Image& image, Rgb background, double threshold = 32);

struct RenderParams {
  std::size_t font_index = 0;
  int font_px = 0;
  Rgb fg;
  Rgb bg;
};

struct RenderRecord {
  std::filesystem::path font;
  int font_px = 0;
  Rgb fg;
  Rgb bg;
};

struct RenderedLine {
  Image image;
  RenderRecord record;
};

/// Draws font, size and colour pair for a line from its seed.
RenderParams sample_render_params(const SynthConfig& config, std::uint64_t seed);

/// Renders text lines with the fonts of one config. Not thread-safe; use one
/// renderer per worker.
class LineRenderer {
 public:
  explicit LineRenderer(const SynthConfig& config);
  ~LineRenderer();
  LineRenderer(LineRenderer&&) noexcept;
  LineRenderer& operator=(LineRenderer&&) noexcept;

  /// Throws DataError for blank text and MissingGlyphError if the chosen font
  /// lacks a glyph.
  RenderedLine render(std::string_view text, const RenderParams& params);
  RenderedLine render(std::string_view text, std::uint64_t seed);

  const SynthConfig& config() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Convenience wrapper constructing a temporary renderer.
RenderedLine render_line(std::string_view text, const SynthConfig& config, std::uint64_t seed);

/// Applies each spec independently with its probability. Only Rotate changes
/// dimensions. Deterministic for a fixed seed.
Image degrade(const Image& image, const std::vector<DegradationSpec>& specs, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Datasets

struct CorpusLines {
  std::vector<std::string> lines;
  std::size_t too_long = 0;
  std::size_t duplicates = 0;
  std::size_t empty = 0;
};

/// Trimmed, NFC, non-empty lines of at most max_len scalars, de-duplicated in
/// first-occurrence order across the files in the given order.
CorpusLines load_corpus_lines(const std::vector<std::filesystem::path>& files, std::size_t max_len);

struct PlannedLine {
  std::string stem;
  std::string text;
  std::uint64_t seed = 0;
  std::size_t source_index = 0;
  bool uppercase_twin = false;
};

/// Every image the generator will attempt, in output order: each input line
/// followed by its uppercase twin when sampled.
std::vector<PlannedLine> plan_dataset(const std::vector<std::string>& lines, const SynthConfig& config);

struct SkippedLine {
  std::string stem;
  std::string text;
  std::string reason;
};

struct GenerationSummary {
  DatasetManifest manifest;
  std::size_t input_lines = 0;
  std::size_t uppercase_pairs = 0;
  std::size_t written = 0;
  std::vector<SkippedLine> skipped;

  nlohmann::ordered_json to_json() const;
};

/// Renders, degrades and writes `<stem>.png` + `<stem>.gt.txt` for every
/// planned line and `manifest.jsonl` into config.output_dir. Lines that no font
/// can render are skipped and reported.
GenerationSummary generate_dataset(const std::vector<std::string>& lines, const SynthConfig& config,
                                   unsigned jobs = 1);

inline constexpr const char* kManifestFileName = "manifest.jsonl";

}  // namespace ocreval::synth

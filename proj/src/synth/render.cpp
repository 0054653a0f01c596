// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <opencv2/freetype.hpp>
#include <opencv2/imgproc.hpp>
#include <random>

#include "ocreval/error.hpp"
#include "ocreval/synth.hpp"
#include "ocreval/unicode.hpp"
#include "opencv_bridge.hpp"

namespace ocreval::synth {

namespace {

// Tall and deep glyphs used to size the canvas independently of the text.
constexpr const char* kMetricProbe = "ÅÁÉŊjgpqy|";

std::uint64_t draw_index(std::mt19937_64& rng, std::uint64_t n) {
  return static_cast<std::uint64_t>(static_cast<double>(rng() >> 11) * 0x1.0p-53 * static_cast<double>(n));
}

}  // namespace

RenderParams sample_render_params(const SynthConfig& config, std::uint64_t seed) {
  std::mt19937_64 rng(mix64(seed ^ 0x52454e444552ULL));
  RenderParams params;
  params.font_index = static_cast<std::size_t>(draw_index(rng, config.fonts.size()));
  const auto sizes = static_cast<std::uint64_t>(config.max_font_px - config.min_font_px + 1);
  params.font_px = config.min_font_px + static_cast<int>(draw_index(rng, sizes));
  std::vector<std::pair<Rgb, Rgb>> pairs;
  for (const auto& fg : config.fg_colors) {
    for (const auto& bg : config.bg_colors) {
      if (std::abs(fg.luminance() - bg.luminance()) >= config.min_contrast) pairs.emplace_back(fg, bg);
    }
  }
  if (pairs.empty()) throw DataError("no foreground/background pair meets the contrast floor");
  const auto& chosen = pairs[static_cast<std::size_t>(draw_index(rng, pairs.size()))];
  params.fg = chosen.first;
  params.bg = chosen.second;
  return params;
}

struct LineRenderer::Impl {
  SynthConfig config;
  std::vector<cv::Ptr<cv::freetype::FreeType2>> faces;
  std::vector<std::optional<FontCoverage>> coverage;

  cv::freetype::FreeType2& face(std::size_t index) {
    if (!faces[index]) {
      faces[index] = cv::freetype::createFreeType2();
      faces[index]->loadFontData(config.fonts[index].string(), 0);
    }
    return *faces[index];
  }

  const FontCoverage& cover(std::size_t index) {
    if (!coverage[index]) coverage[index] = FontCoverage::load(config.fonts[index]);
    return *coverage[index];
  }
};

LineRenderer::LineRenderer(const SynthConfig& config) : impl_(std::make_unique<Impl>()) {
  config.validate();
  impl_->config = config;
  impl_->faces.resize(config.fonts.size());
  impl_->coverage.resize(config.fonts.size());
}

LineRenderer::~LineRenderer() = default;
LineRenderer::LineRenderer(LineRenderer&&) noexcept = default;
LineRenderer& LineRenderer::operator=(LineRenderer&&) noexcept = default;

const SynthConfig& LineRenderer::config() const { return impl_->config; }

RenderedLine LineRenderer::render(std::string_view text, const RenderParams& params) {
  const SynthConfig& cfg = impl_->config;
  if (params.font_index >= cfg.fonts.size()) throw DataError("render: font index out of range");
  if (unicode::trim(text).empty()) throw DataError("render: text is blank");
  const std::u32string scalars = unicode::to_scalars(text);
  if (auto missing = impl_->cover(params.font_index).first_missing(scalars)) {
    throw MissingGlyphError(*missing, cfg.fonts[params.font_index]);
  }

  auto& ft = impl_->face(params.font_index);
  const std::string utf8(text);
  int text_descent = 0;
  int probe_descent = 0;
  const cv::Size text_size = ft.getTextSize(utf8, params.font_px, -1, &text_descent);
  const cv::Size probe_size = ft.getTextSize(kMetricProbe, params.font_px, -1, &probe_descent);
  const int ascent = std::max({text_size.height, probe_size.height, params.font_px});
  const int descent = std::max({text_descent, probe_descent, 1});
  const int pad = cfg.padding_px;
  const int width = std::max(text_size.width, 1) + 2 * pad;
  const int height = ascent + descent + 2 * pad;

  // The canvas holds RGB triples, so colours are passed in r, g, b order.
  cv::Mat canvas(height, width, CV_8UC3, cv::Scalar(params.bg.r, params.bg.g, params.bg.b));
  ft.putText(canvas, utf8, cv::Point(pad, pad + ascent), params.font_px,
             cv::Scalar(params.fg.r, params.fg.g, params.fg.b), -1, cv::LINE_AA, true);

  RenderedLine out;
  out.image = detail::from_mat(canvas);
  out.record = RenderRecord{cfg.fonts[params.font_index], params.font_px, params.fg, params.bg};
  return out;
}

RenderedLine LineRenderer::render(std::string_view text, std::uint64_t seed) {
  return render(text, sample_render_params(impl_->config, seed));
}

RenderedLine render_line(std::string_view text, const SynthConfig& config, std::uint64_t seed) {
  LineRenderer renderer(config);
  return renderer.render(text, seed);
}

}  // namespace ocreval::synth

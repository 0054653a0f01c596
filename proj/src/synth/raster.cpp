// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <array>
#include <cmath>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>
#include <random>

#include "ocreval/error.hpp"
#include "ocreval/synth.hpp"
#include "opencv_bridge.hpp"

namespace ocreval::synth {

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform(std::mt19937_64& rng, const Range& range) {
  return range.lo + (range.hi - range.lo) * uniform01(rng);
}

cv::Scalar border_median(const cv::Mat& img) {
  std::array<std::vector<std::uint8_t>, 3> channels;
  auto take = [&](int x, int y) {
    const auto& px = img.at<cv::Vec3b>(y, x);
    for (int k = 0; k < 3; ++k) channels[k].push_back(px[k]);
  };
  for (int x = 0; x < img.cols; ++x) {
    take(x, 0);
    take(x, img.rows - 1);
  }
  for (int y = 0; y < img.rows; ++y) {
    take(0, y);
    take(img.cols - 1, y);
  }
  cv::Scalar out;
  for (int k = 0; k < 3; ++k) {
    auto& v = channels[k];
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
    out[k] = v[v.size() / 2];
  }
  return out;
}

cv::Mat rotate(const cv::Mat& img, double degrees) {
  const cv::Point2f center(static_cast<float>(img.cols) / 2.0f, static_cast<float>(img.rows) / 2.0f);
  cv::Mat m = cv::getRotationMatrix2D(center, degrees, 1.0);
  const double rad = degrees * CV_PI / 180.0;
  const double c = std::abs(std::cos(rad));
  const double s = std::abs(std::sin(rad));
  const int w = static_cast<int>(std::ceil(img.cols * c + img.rows * s - 1e-9));
  const int h = static_cast<int>(std::ceil(img.cols * s + img.rows * c - 1e-9));
  m.at<double>(0, 2) += (w - img.cols) / 2.0;
  m.at<double>(1, 2) += (h - img.rows) / 2.0;
  cv::Mat out;
  cv::warpAffine(img, out, m, cv::Size(w, h), cv::INTER_LINEAR, cv::BORDER_CONSTANT, border_median(img));
  return out;
}

void apply(cv::Mat& img, const DegradationSpec& spec, std::mt19937_64& rng) {
  const double value = uniform(rng, spec.range);
  switch (spec.kind) {
    case DegradationKind::GaussianNoise: {
      if (value <= 0) return;
      cv::Mat noise(img.size(), CV_32FC3);
      cv::RNG noise_rng(rng());
      noise_rng.fill(noise, cv::RNG::NORMAL, cv::Scalar::all(0), cv::Scalar::all(value));
      cv::Mat sum;
      img.convertTo(sum, CV_32FC3);
      sum += noise;
      sum.convertTo(img, CV_8UC3);
      return;
    }
    case DegradationKind::Blur:
      if (value < 0.1) return;
      cv::GaussianBlur(img, img, cv::Size(0, 0), value);
      return;
    case DegradationKind::Rotate:
      if (value == 0) return;
      img = rotate(img, value);
      return;
    case DegradationKind::JpegArtifact: {
      const int quality = static_cast<int>(std::lround(value));
      std::vector<std::uint8_t> buffer;
      cv::Mat bgr;
      cv::cvtColor(img, bgr, cv::COLOR_RGB2BGR);
      cv::imencode(".jpg", bgr, buffer, {cv::IMWRITE_JPEG_QUALITY, quality});
      cv::cvtColor(cv::imdecode(buffer, cv::IMREAD_COLOR), img, cv::COLOR_BGR2RGB);
      return;
    }
    case DegradationKind::BleedThrough: {
      if (value <= 0) return;
      cv::Mat ghost;
      cv::flip(img, ghost, 1);
      cv::GaussianBlur(ghost, ghost, cv::Size(0, 0), 1.5);
      cv::Mat mixed;
      cv::addWeighted(img, 1.0 - value, ghost, value, 0.0, mixed);
      cv::min(img, mixed, img);
      return;
    }
    case DegradationKind::SaltPepper: {
      const auto total = static_cast<std::uint64_t>(img.cols) * static_cast<std::uint64_t>(img.rows);
      const auto count = static_cast<std::uint64_t>(std::llround(value * static_cast<double>(total)));
      for (std::uint64_t k = 0; k < count; ++k) {
        const std::uint64_t r = rng();
        const int x = static_cast<int>((r >> 1) % static_cast<std::uint64_t>(img.cols));
        const int y = static_cast<int>((rng() >> 1) % static_cast<std::uint64_t>(img.rows));
        const std::uint8_t v = (r & 1) ? 255 : 0;
        img.at<cv::Vec3b>(y, x) = cv::Vec3b(v, v, v);
      }
      return;
    }
  }
}

}  // namespace

std::vector<std::uint8_t> encode_png(const Image& image) {
  if (image.empty()) throw DataError("cannot encode an empty image");
  Image copy = image;
  cv::Mat bgr;
  cv::cvtColor(detail::as_mat(copy), bgr, cv::COLOR_RGB2BGR);
  std::vector<std::uint8_t> bytes;
  if (!cv::imencode(".png", bgr, bytes, {cv::IMWRITE_PNG_COMPRESSION, 6})) {
    throw DataError("PNG encoding failed");
  }
  return bytes;
}

Image decode_image(const std::vector<std::uint8_t>& bytes) {
  cv::Mat bgr = cv::imdecode(bytes, cv::IMREAD_COLOR);
  if (bgr.empty()) throw DataError("cannot decode image");
  cv::Mat rgb;
  cv::cvtColor(bgr, rgb, cv::COLOR_BGR2RGB);
  return detail::from_mat(rgb);
}

double foreground_fraction(const Image& image, Rgb background, double threshold) {
  if (image.empty()) return 0;
  const double bg = background.luminance();
  std::size_t count = 0;
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      const std::uint8_t* p = image.at(x, y);
      const double lum = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
      if (std::abs(lum - bg) > threshold) ++count;
    }
  }
  return static_cast<double>(count) / (static_cast<double>(image.width) * image.height);
}

Image degrade(const Image& image, const std::vector<DegradationSpec>& specs, std::uint64_t seed) {
  if (image.empty()) throw DataError("degrade: empty image");
  if (specs.empty()) return image;
  Image work = image;
  cv::Mat img = detail::as_mat(work).clone();
  for (std::size_t k = 0; k < specs.size(); ++k) {
    // Each spec draws from its own stream so enabling one does not shift the others.
    std::mt19937_64 rng(mix64(seed + 0x9e3779b97f4a7c15ULL * (k + 1)));
    if (uniform01(rng) >= specs[k].probability) continue;
    apply(img, specs[k], rng);
  }
  return detail::from_mat(img);
}

}  // namespace ocreval::synth

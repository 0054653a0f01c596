// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <opencv2/core.hpp>

#include "ocreval/synth.hpp"

namespace ocreval::synth::detail {

// Images are stored as RGB; OpenCV codecs expect BGR.
inline cv::Mat as_mat(Image& image) {
  return cv::Mat(image.height, image.width, CV_8UC3, image.pixels.data());
}

inline Image from_mat(const cv::Mat& mat) {
  CV_Assert(mat.type() == CV_8UC3);
  Image image;
  image.width = mat.cols;
  image.height = mat.rows;
  image.pixels.resize(static_cast<std::size_t>(mat.cols) * mat.rows * 3);
  cv::Mat view(mat.rows, mat.cols, CV_8UC3, image.pixels.data());
  mat.copyTo(view);
  return image;
}

}  // namespace ocreval::synth::detail

#pragma once

// PNG/JPEG file access. Only this header depends on OpenCV.

#include <string>
#include <vector>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "pencilflow/error.hpp"
#include "pencilflow/raster.hpp"

namespace pencilflow {

/// Reads an 8-bit PNG or JPEG as RGB; grayscale files are expanded.
inline RgbImage load_rgb(const std::string& path) {
  cv::Mat bgr;
  try {
    bgr = cv::imread(path, cv::IMREAD_COLOR);
  } catch (const cv::Exception& e) {
    throw Error(ErrorKind::io, "cannot read image " + path + ": " + e.what());
  }
  if (bgr.empty()) throw Error(ErrorKind::io, "cannot read image: " + path);
  if (bgr.depth() != CV_8U) throw Error(ErrorKind::invalid_input, "only 8-bit images are supported: " + path);
  RgbImage rgb(bgr.cols, bgr.rows);
  for (int y = 0; y < bgr.rows; ++y) {
    const auto* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < bgr.cols; ++x) rgb.set(x, y, {row[x][2], row[x][1], row[x][0]});
  }
  return rgb;
}

namespace detail {
inline void write_mat(const std::string& path, const cv::Mat& mat) {
  bool ok = false;
  try {
    ok = cv::imwrite(path, mat);
  } catch (const cv::Exception& e) {
    throw Error(ErrorKind::io, "cannot write image " + path + ": " + e.what());
  }
  if (!ok) throw Error(ErrorKind::io, "cannot write image: " + path);
}
}  // namespace detail

/// Writes an 8-bit grayscale PNG. `scale` maps stored values to [0, 255]
/// (use 255 for the [0, 1] edge map).
inline void save_png(const std::string& path, const GrayImage& img, double scale = 1.0) {
  cv::Mat mat(img.height(), img.width(), CV_8UC1);
  for (int y = 0; y < img.height(); ++y) {
    auto* row = mat.ptr<std::uint8_t>(y);
    for (int x = 0; x < img.width(); ++x) row[x] = to_byte(img(x, y) * scale);
  }
  detail::write_mat(path, mat);
}

inline void save_png(const std::string& path, const RgbImage& img) {
  cv::Mat mat(img.height, img.width, CV_8UC3);
  for (int y = 0; y < img.height; ++y) {
    auto* row = mat.ptr<cv::Vec3b>(y);
    for (int x = 0; x < img.width; ++x) {
      const auto [r, g, b] = img.at(x, y);
      row[x] = cv::Vec3b(b, g, r);
    }
  }
  detail::write_mat(path, mat);
}

}  // namespace pencilflow

#pragma once

// Synthesis of a single pencil stroke. A stroke is a W x L gray patch whose
// cross-section follows a V-shaped mean profile with noise that is strongest
// on the center line; it is then bent twice along a large-radius arc.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "pencilflow/error.hpp"
#include "pencilflow/random.hpp"
#include "pencilflow/raster.hpp"

namespace pencilflow {

struct DistributionRow {
  double mean = 255.0;
  double variance = 0.0;
};

/// Per-row gray statistics of a stroke cross-section. rows[w] describes row
/// w of the W-row patch; row (W-1)/2 is the center line.
struct DistributionMatrix {
  int width = 0;
  std::vector<DistributionRow> rows;

  /// Distance of row w from the center line.
  int distance(int w) const noexcept { return std::abs(2 * w - (width - 1)) / 2; }
};

inline void check_stroke_params(double gray, int width) {
  if (!(gray >= 0.0 && gray <= 255.0)) throw Error(ErrorKind::config, "stroke gray must be in [0, 255]");
  if (width < 3) throw Error(ErrorKind::config, "stroke width must be at least 3");
  if (width % 2 == 0) throw Error(ErrorKind::config, "stroke width must be odd");
}

/// mean(d) = G + (255 - G) * 2d / (W - 1)
/// variance(d) = (255 - G) * cos(pi * d / (W - 1))
inline DistributionMatrix distribution_matrix(double gray, int width) {
  check_stroke_params(gray, width);
  DistributionMatrix m{width, std::vector<DistributionRow>(static_cast<std::size_t>(width))};
  const int half = (width - 1) / 2;
  for (int w = 0; w < width; ++w) {
    const int d = m.distance(w);
    if (d == half) {
      m.rows[w] = {255.0, 0.0};  // exact at the boundary, no trig residue
      continue;
    }
    const double t = static_cast<double>(d) / (width - 1);
    m.rows[w].mean = gray + (255.0 - gray) * 2.0 * t;
    m.rows[w].variance = (255.0 - gray) * std::cos(std::numbers::pi * t);
  }
  return m;
}

struct StrokeRaster {
  GrayImage patch;          // background 255
  double anchor_row = 0.0;  // center line at the midpoint column
  double anchor_col = 0.0;
  int length = 0;
  int width = 0;
};

/// Straight W x L stroke: every pixel of row w is an independent draw from
/// Normal(mean(d), sqrt(variance(d))), clamped to [0, 255]. Pixels are drawn
/// row-major from `rng`.
inline StrokeRaster synthesize_straight(double gray, int width, int length, RandomStream& rng) {
  if (length < 1) throw Error(ErrorKind::config, "stroke length must be at least 1");
  const DistributionMatrix m = distribution_matrix(gray, width);
  StrokeRaster r{GrayImage(length, width, 255.0), (width - 1) / 2.0, (length - 1) / 2.0, length, width};
  for (int w = 0; w < width; ++w) {
    const auto [mean, variance] = m.rows[w];
    if (variance <= 0.0) {
      for (int c = 0; c < length; ++c) r.patch(c, w) = clamp_gray(mean);
      continue;
    }
    const double sd = std::sqrt(variance);
    for (int c = 0; c < length; ++c) r.patch(c, w) = clamp_gray(rng.normal(mean, sd));
  }
  return r;
}

enum class BendPass {
  discard,   // clip to the incoming patch box
  preserve,  // grow the patch downward to keep every shifted pixel
};

/// Vertical offset of the column at signed abscissa x (origin at the
/// midpoint), for an arc of radius R = L^2 / (4W): dy = x^2 / (2R).
inline double bend_offset(double x, int length, int width) noexcept {
  const double radius = static_cast<double>(length) * length / (4.0 * width);
  return x * x / (2.0 * radius);
}

/// Shifts every column down by its arc offset using two-tap linear
/// interpolation along the column; cells with no source read as 255.
/// Strokes shorter than 2W are returned unchanged.
inline StrokeRaster bend(const StrokeRaster& in, BendPass pass) {
  const int L = in.length, W = in.width;
  if (L < 2 * W) return in;
  const int in_h = in.patch.height();
  const double mid = (L - 1) / 2.0;
  const double max_offset = bend_offset(mid, L, W);
  const int out_h = pass == BendPass::discard ? in_h : in_h + static_cast<int>(std::ceil(max_offset));

  StrokeRaster out{GrayImage(L, out_h, 255.0), in.anchor_row, in.anchor_col, L, W};
  auto src = [&](int c, int r) { return (r >= 0 && r < in_h) ? in.patch(c, r) : 255.0; };
  for (int c = 0; c < L; ++c) {
    const double dy = bend_offset(c - mid, L, W);
    const double k = std::floor(dy);
    const double f = dy - k;
    const int shift = static_cast<int>(k);
    for (int r = 0; r < out_h; ++r) {
      // out(r) = in(r - dy), interpolated between rows r - shift - 1 and r - shift
      const double upper = src(c, r - shift - 1);
      const double lower = src(c, r - shift);
      out.patch(c, r) = std::lerp(lower, upper, f);
    }
  }
  return out;
}

/// Straight stroke followed by one clipping bend and one growing bend.
inline StrokeRaster generate_stroke(double gray, int width, int length, RandomStream& rng) {
  return bend(bend(synthesize_straight(gray, width, length, rng), BendPass::discard), BendPass::preserve);
}

}  // namespace pencilflow

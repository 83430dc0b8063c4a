#pragma once

// The guided drawing core. Strokes are searched per direction bucket in a
// frame where that direction is horizontal, then rasterized one at a time
// back into the canvas frame and merged by taking the darkest value.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "pencilflow/error.hpp"
#include "pencilflow/etf.hpp"
#include "pencilflow/random.hpp"
#include "pencilflow/raster.hpp"
#include "pencilflow/stroke_model.hpp"

namespace pencilflow {

/// Everything needed to redraw one stroke. Positions are in the rotated
/// search frame of direction `dir_index`, which is a pure function of the
/// canvas size and `angle`. `row_rot` is the stroke's center line and
/// `col_rot` its first column.
struct StrokeSpec {
  int dir_index = 0;
  double angle = 0.0;
  double gray = 0.0;
  int width = 5;
  int length = 1;      // searched run length
  int ext_length = 1;  // drawn length; length + 4 * width once extended
  int row_rot = 0;
  int col_rot = 0;
  std::uint64_t rng_cursor = 0;  // seed of the stroke's pixel substream
  double importance = 0.0;

  bool extended() const noexcept { return ext_length == length + 4 * width; }
  bool operator==(const StrokeSpec&) const = default;
};

struct Run {
  int start = 0;
  int length = 0;
  bool operator==(const Run&) const = default;
};

/// Maximal runs on `row` where the mask is set and the gray value is at most
/// `level`.
inline std::vector<Run> scan_row_runs(const GrayImage& quantized, const GrayImage& mask, int row, double level) {
  std::vector<Run> runs;
  const int w = quantized.width();
  int x = 0;
  while (x < w) {
    while (x < w && !(mask(x, row) > 0.0 && quantized(x, row) <= level)) ++x;
    const int start = x;
    while (x < w && mask(x, row) > 0.0 && quantized(x, row) <= level) ++x;
    if (x > start) runs.push_back({start, x - start});
  }
  return runs;
}

/// Vertical distance to the next scan row: round(Normal(W, 1)), at least 1.
inline int next_scan_step(RandomStream& rng, int stroke_width) {
  return std::max(1, static_cast<int>(std::lround(rng.normal(stroke_width, 1.0))));
}

/// Grayscale-guided stroke search. For every direction bucket the quantized
/// image (nearest sampling, white fill) and the bucket mask are rotated so
/// the bucket direction is horizontal; then for every non-white level, in
/// ascending order, scan rows starting at row 0 are visited with random
/// steps and each maximal run of (mask && Q <= level) becomes a stroke.
/// Strokes come out in (direction, level, row, column) order and are not
/// yet extended.
inline std::vector<StrokeSpec> search_strokes(const GrayImage& quantized, const DirectionMasks& masks,
                                              std::span<const double> levels, int stroke_width,
                                              std::uint64_t seed) {
  if (masks.width != quantized.width() || masks.height != quantized.height())
    throw Error(ErrorKind::invalid_input, "direction masks do not match the quantized image");
  check_stroke_params(0.0, stroke_width);
  std::vector<StrokeSpec> specs;
  for (int k = 0; k < masks.n_dirs; ++k) {
    if (masks.count(k) == 0) continue;
    const double angle = masks.angle(k);
    const GrayImage q_rot = rotate(quantized, angle, 255.0, Interp::nearest).image;
    const GrayImage m_rot = rotate(masks.mask(k), angle, 0.0, Interp::nearest).image;
    for (std::size_t j = 0; j < levels.size(); ++j) {
      const double level = levels[j];
      if (level >= 255.0) continue;  // renders blank
      RandomStream steps(derive_seed(seed, Stream::scan_rows, {k, static_cast<std::int64_t>(j)}));
      for (int row = 0; row < q_rot.height(); row += next_scan_step(steps, stroke_width)) {
        for (const Run& run : scan_row_runs(q_rot, m_rot, row, level)) {
          StrokeSpec s;
          s.dir_index = k;
          s.angle = angle;
          s.gray = level;
          s.width = stroke_width;
          s.length = run.length;
          s.ext_length = run.length;
          s.row_rot = row;
          s.col_rot = run.start;
          s.rng_cursor = derive_seed(seed, Stream::stroke, {k, static_cast<std::int64_t>(j), row, run.start});
          specs.push_back(s);
        }
      }
    }
  }
  return specs;
}

/// Adds 2W at the head and 2W at the tail of every stroke.
inline std::vector<StrokeSpec> extend_strokes(std::vector<StrokeSpec> specs) {
  for (StrokeSpec& s : specs) {
    s.ext_length = s.length + 4 * s.width;
    s.col_rot -= 2 * s.width;
  }
  return specs;
}

/// A stroke rasterized in canvas coordinates: `patch` covers the canvas box
/// starting at (x0, y0). Empty when the stroke misses the canvas.
struct PlacedStroke {
  int x0 = 0;
  int y0 = 0;
  GrayImage patch;
};

/// Rasterizes a stroke into the canvas frame. The stroke raster is laid out
/// along the search-frame row, and every canvas pixel in its footprint is
/// mapped into the search frame and sampled bilinearly (white outside),
/// which rotates the patch back by -angle and positions it in one step.
inline PlacedStroke render_stroke(const StrokeSpec& spec, int canvas_width, int canvas_height) {
  RandomStream rng(spec.rng_cursor);
  const StrokeRaster raster = generate_stroke(spec.gray, spec.width, spec.ext_length, rng);
  const RotationTransform frame = make_rotation(canvas_width, canvas_height, spec.angle);

  // search-frame position of patch pixel (c, r)
  const double origin_x = spec.col_rot;
  const double origin_y = spec.row_rot - raster.anchor_row;
  const double pw = raster.patch.width(), ph = raster.patch.height();

  double min_x = canvas_width, min_y = canvas_height, max_x = -1.0, max_y = -1.0;
  for (const Point2 corner : {Point2{-1.0, -1.0}, Point2{pw, -1.0}, Point2{-1.0, ph}, Point2{pw, ph}}) {
    const Point2 p = frame.to_src({origin_x + corner.x, origin_y + corner.y});
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  const int x0 = std::max(0, static_cast<int>(std::floor(min_x)));
  const int y0 = std::max(0, static_cast<int>(std::floor(min_y)));
  const int x1 = std::min(canvas_width - 1, static_cast<int>(std::ceil(max_x)));
  const int y1 = std::min(canvas_height - 1, static_cast<int>(std::ceil(max_y)));
  if (x1 < x0 || y1 < y0) return {};

  PlacedStroke placed{x0, y0, GrayImage(x1 - x0 + 1, y1 - y0 + 1, 255.0)};
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const Point2 q = frame.to_dst({static_cast<double>(x), static_cast<double>(y)});
      placed.patch(x - x0, y - y0) =
          sample(raster.patch, {q.x - origin_x, q.y - origin_y}, Interp::bilinear, 255.0);
    }
  }
  return placed;
}

/// canvas = min(canvas, stroke) over the stroke's footprint.
inline void composite_min(GrayImage& canvas, const PlacedStroke& stroke) {
  const GrayImage& p = stroke.patch;
  for (int y = 0; y < p.height(); ++y) {
    for (int x = 0; x < p.width(); ++x) {
      const int cx = stroke.x0 + x, cy = stroke.y0 + y;
      if (!canvas.contains(cx, cy)) continue;
      double& c = canvas(cx, cy);
      c = std::min(c, p(x, y));
    }
  }
}

inline GrayImage aggregate(std::span<const PlacedStroke> strokes, int width, int height) {
  GrayImage canvas(width, height, 255.0);
  for (const PlacedStroke& s : strokes) composite_min(canvas, s);
  return canvas;
}

inline int default_kernel_len(int width, int height, int divisor = 30) {
  return std::max(3, static_cast<int>(std::lround(static_cast<double>(std::min(width, height)) / divisor)));
}

namespace detail {

struct Offset {
  int dx;
  int dy;
  bool operator==(const Offset&) const = default;
};

// Taps of a one-pixel-thick line of `len` samples through the origin.
// Symmetric about the origin, so correlation and convolution coincide.
inline std::vector<Offset> line_taps(double angle, int len) {
  std::vector<Offset> taps;
  const double c = std::cos(angle), s = std::sin(angle);
  for (int m = 0; m < len; ++m) {
    const double t = m - (len - 1) / 2.0;
    const Offset o{static_cast<int>(std::lround(t * c)), static_cast<int>(std::lround(t * s))};
    if (std::find(taps.begin(), taps.end(), o) == taps.end()) taps.push_back(o);
  }
  return taps;
}

}  // namespace detail

/// Edge map from directional line convolutions of the gradient magnitude.
/// Each pixel's magnitude is assigned to the line direction with the largest
/// response (ties to the lower index), the per-direction maps are convolved
/// with their own line again and summed into S, and T = 1 - S / max(S).
/// Values lie in [0, 1]; a flat input gives T = 1 everywhere.
inline GrayImage edge_map(const GradientField& grad, int n_dirs, int kernel_len) {
  if (kernel_len < 3) throw Error(ErrorKind::config, "edge kernel length must be at least 3");
  if (n_dirs < 1) throw Error(ErrorKind::config, "direction count must be at least 1");
  const int w = grad.width, h = grad.height;
  const std::size_t n = grad.magnitude.size();
  std::vector<std::vector<detail::Offset>> taps(static_cast<std::size_t>(n_dirs));
  for (int i = 0; i < n_dirs; ++i) taps[i] = detail::line_taps(i * std::numbers::pi / n_dirs, kernel_len);

  auto mag_at = [&](int x, int y) { return (x >= 0 && y >= 0 && x < w && y < h) ? grad.mag(x, y) : 0.0; };

  std::vector<double> best(n, -1.0);
  std::vector<int> label(n, 0);
  for (int i = 0; i < n_dirs; ++i) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        double r = 0.0;
        for (const auto& o : taps[i]) r += mag_at(x + o.dx, y + o.dy);
        const std::size_t p = static_cast<std::size_t>(y) * w + x;
        if (r > best[p]) {
          best[p] = r;
          label[p] = i;
        }
      }
    }
  }

  std::vector<double> sum(n, 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t p = static_cast<std::size_t>(y) * w + x;
      const double m = grad.magnitude[p];
      if (m == 0.0) continue;
      for (const auto& o : taps[label[p]]) {
        const int qx = x + o.dx, qy = y + o.dy;
        if (qx >= 0 && qy >= 0 && qx < w && qy < h) sum[static_cast<std::size_t>(qy) * w + qx] += m;
      }
    }
  }

  const double max_sum = n ? *std::max_element(sum.begin(), sum.end()) : 0.0;
  GrayImage t(w, h, 1.0);
  if (max_sum <= 0.0) return t;
  auto px = t.pixels();
  for (std::size_t p = 0; p < n; ++p) px[p] = std::clamp(1.0 - sum[p] / max_sum, 0.0, 1.0);
  return t;
}

/// R = A * T pointwise.
inline GrayImage compose_final(const GrayImage& strokes, const GrayImage& edges) {
  if (strokes.width() != edges.width() || strokes.height() != edges.height())
    throw Error(ErrorKind::invalid_input, "stroke canvas and edge map differ in size");
  GrayImage out = strokes;
  auto o = out.pixels();
  auto e = edges.pixels();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] *= e[i];
  return out;
}

}  // namespace pencilflow

#pragma once

// Grayscale raster primitives shared by every pipeline stage.
//
// Coordinates are (x, y) = (column, row) with y pointing down and pixel
// centers on integer coordinates. Rotation angles are in radians and a
// positive angle turns the picture counterclockwise as seen on screen. A
// stroke direction `a` (the tangent (cos a, sin a) in y-down coordinates)
// becomes horizontal after rotate(img, a).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "pencilflow/error.hpp"

namespace pencilflow {

/// Row-major real-valued gray raster. Values are nominally in [0, 255];
/// the same type carries the [0, 1] edge map.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(int width, int height, double fill = 255.0)
      : width_(width), height_(height),
        data_(static_cast<std::size_t>(std::max(width, 0)) *
                  static_cast<std::size_t>(std::max(height, 0)),
              fill) {
    if (width < 0 || height < 0) throw Error(ErrorKind::invalid_input, "negative image size");
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  double operator()(int x, int y) const noexcept { return data_[index(x, y)]; }
  double& operator()(int x, int y) noexcept { return data_[index(x, y)]; }

  std::span<const double> pixels() const noexcept { return data_; }
  std::span<double> pixels() noexcept { return data_; }

  bool operator==(const GrayImage&) const = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

/// Interleaved 8-bit RGB.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // size = 3 * width * height

  RgbImage() = default;
  RgbImage(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0) {}

  bool empty() const noexcept { return width <= 0 || height <= 0; }

  std::array<std::uint8_t, 3> at(int x, int y) const {
    const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
    return {data[i], data[i + 1], data[i + 2]};
  }
  void set(int x, int y, std::array<std::uint8_t, 3> rgb) {
    const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
    data[i] = rgb[0];
    data[i + 1] = rgb[1];
    data[i + 2] = rgb[2];
  }

  bool operator==(const RgbImage&) const = default;
};

struct GradientField {
  int width = 0;
  int height = 0;
  std::vector<double> gx;
  std::vector<double> gy;
  std::vector<double> magnitude;

  double mag(int x, int y) const noexcept {
    return magnitude[static_cast<std::size_t>(y) * width + x];
  }
};

inline double clamp_gray(double v) noexcept { return std::clamp(v, 0.0, 255.0); }

/// Exported 8-bit value of a real gray level.
inline std::uint8_t to_byte(double v) noexcept {
  return static_cast<std::uint8_t>(std::lround(clamp_gray(v)));
}

/// BT.601 luma.
inline GrayImage to_grayscale(const RgbImage& rgb) {
  if (rgb.empty()) throw Error(ErrorKind::invalid_input, "empty input");
  GrayImage gray(rgb.width, rgb.height, 0.0);
  for (int y = 0; y < rgb.height; ++y) {
    for (int x = 0; x < rgb.width; ++x) {
      const auto [r, g, b] = rgb.at(x, y);
      gray(x, y) = clamp_gray(0.299 * r + 0.587 * g + 0.114 * b);
    }
  }
  return gray;
}

namespace detail {

inline int histogram_bin(double v) noexcept {
  return static_cast<int>(std::lround(clamp_gray(v)));
}

// Tile boundaries [begin(i), begin(i+1)) splitting `extent` into `count`.
inline int tile_begin(int i, int extent, int count) noexcept {
  return static_cast<int>(static_cast<long long>(i) * extent / count);
}

// Locates `pos` between neighbouring tile centers: returns the lower tile
// and the weight of the upper one. Outside the outermost centers the mapping
// is taken from the nearest tile alone.
inline std::pair<int, double> tile_blend(double pos, const std::vector<double>& centers) {
  const int n = static_cast<int>(centers.size());
  if (pos <= centers.front()) return {0, 0.0};
  if (pos >= centers.back()) return {n - 1, 0.0};
  int i = 0;
  while (i + 1 < n && centers[i + 1] <= pos) ++i;
  if (i == n - 1) return {n - 1, 0.0};
  return {i, (pos - centers[i]) / (centers[i + 1] - centers[i])};
}

}  // namespace detail

/// Contrast limited adaptive histogram equalization over a tiles_x by tiles_y
/// grid. The clip limit is relative: a bin may hold at most
/// clip_limit * tile_area / 256 samples, and the clipped excess is spread
/// uniformly over all 256 bins. Tile mappings are blended bilinearly between
/// tile centers. Images smaller than the grid are equalized globally.
inline GrayImage clahe(const GrayImage& img, double clip_limit, int tiles_x, int tiles_y) {
  if (img.empty()) throw Error(ErrorKind::invalid_input, "empty input");
  if (!(clip_limit > 0.0)) throw Error(ErrorKind::config, "clahe clip limit must be positive");
  if (tiles_x < 1 || tiles_y < 1) throw Error(ErrorKind::config, "clahe tile grid must be at least 1x1");
  if (img.width() < tiles_x || img.height() < tiles_y) tiles_x = tiles_y = 1;

  const int w = img.width();
  const int h = img.height();
  std::vector<std::array<double, 256>> luts(static_cast<std::size_t>(tiles_x) * tiles_y);
  std::vector<double> cx(tiles_x), cy(tiles_y);
  for (int i = 0; i < tiles_x; ++i)
    cx[i] = 0.5 * (detail::tile_begin(i, w, tiles_x) + detail::tile_begin(i + 1, w, tiles_x) - 1);
  for (int j = 0; j < tiles_y; ++j)
    cy[j] = 0.5 * (detail::tile_begin(j, h, tiles_y) + detail::tile_begin(j + 1, h, tiles_y) - 1);

  for (int tj = 0; tj < tiles_y; ++tj) {
    for (int ti = 0; ti < tiles_x; ++ti) {
      const int x0 = detail::tile_begin(ti, w, tiles_x), x1 = detail::tile_begin(ti + 1, w, tiles_x);
      const int y0 = detail::tile_begin(tj, h, tiles_y), y1 = detail::tile_begin(tj + 1, h, tiles_y);
      std::array<double, 256> hist{};
      for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) hist[detail::histogram_bin(img(x, y))] += 1.0;

      const double area = static_cast<double>(x1 - x0) * (y1 - y0);
      const double limit = std::max(1.0, clip_limit * area / 256.0);
      double excess = 0.0;
      for (double& c : hist) {
        if (c > limit) {
          excess += c - limit;
          c = limit;
        }
      }
      const double share = excess / 256.0;
      auto& lut = luts[static_cast<std::size_t>(tj) * tiles_x + ti];
      double cdf = 0.0;
      for (int b = 0; b < 256; ++b) {
        cdf += hist[b] + share;
        lut[b] = std::min(255.0, cdf * 255.0 / area);
      }
    }
  }

  GrayImage out(w, h, 0.0);
  for (int y = 0; y < h; ++y) {
    const auto [tj, fy] = detail::tile_blend(y, cy);
    const int tj1 = std::min(tj + 1, tiles_y - 1);
    for (int x = 0; x < w; ++x) {
      const auto [ti, fx] = detail::tile_blend(x, cx);
      const int ti1 = std::min(ti + 1, tiles_x - 1);
      const int b = detail::histogram_bin(img(x, y));
      const double v00 = luts[static_cast<std::size_t>(tj) * tiles_x + ti][b];
      const double v10 = luts[static_cast<std::size_t>(tj) * tiles_x + ti1][b];
      const double v01 = luts[static_cast<std::size_t>(tj1) * tiles_x + ti][b];
      const double v11 = luts[static_cast<std::size_t>(tj1) * tiles_x + ti1][b];
      const double top = v00 + fx * (v10 - v00);
      const double bottom = v01 + fx * (v11 - v01);
      out(x, y) = clamp_gray(top + fy * (bottom - top));
    }
  }
  return out;
}

struct Quantized {
  GrayImage image;
  std::vector<double> levels;  // ascending, always includes 0 and 255
};

inline std::vector<double> quantization_levels(int n_levels) {
  if (n_levels < 2 || n_levels > 64)
    throw Error(ErrorKind::config, "gray level count must be in [2, 64]");
  std::vector<double> levels(static_cast<std::size_t>(n_levels));
  for (int k = 0; k < n_levels; ++k)
    levels[k] = std::round(255.0 * k / (n_levels - 1));
  return levels;
}

/// Uniform quantization: each pixel snaps to the nearest level, ties going to
/// the darker one.
inline Quantized quantize(const GrayImage& img, int n_levels) {
  Quantized q{GrayImage(img.width(), img.height(), 0.0), quantization_levels(n_levels)};
  const auto& levels = q.levels;
  auto src = img.pixels();
  auto dst = q.image.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const double v = src[i];
    auto hi = std::lower_bound(levels.begin(), levels.end(), v);
    if (hi == levels.end()) {
      dst[i] = levels.back();
    } else if (hi == levels.begin() || *hi == v) {
      dst[i] = *hi;
    } else {
      auto lo = hi - 1;
      dst[i] = (v - *lo <= *hi - v) ? *lo : *hi;
    }
  }
  return q;
}

/// Forward differences with edge replication, so the last column has gx = 0
/// and the last row has gy = 0.
inline GradientField gradient(const GrayImage& img) {
  if (img.width() < 2 || img.height() < 2)
    throw Error(ErrorKind::invalid_input, "gradient needs an image of at least 2x2 pixels");
  const int w = img.width(), h = img.height();
  GradientField g{w, h, {}, {}, {}};
  const std::size_t n = img.size();
  g.gx.assign(n, 0.0);
  g.gy.assign(n, 0.0);
  g.magnitude.assign(n, 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      const double v = img(x, y);
      const double dx = img(std::min(x + 1, w - 1), y) - v;
      const double dy = img(x, std::min(y + 1, h - 1)) - v;
      g.gx[i] = dx;
      g.gy[i] = dy;
      g.magnitude[i] = std::sqrt(dx * dx + dy * dy);
    }
  }
  return g;
}

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Maps between a source raster and its rotated, bounding-box-expanded copy.
/// Both centers sit at ((size - 1) / 2) so the transform is exact for the
/// axis-aligned angles.
struct RotationTransform {
  double angle = 0.0;
  int src_width = 0, src_height = 0;
  int dst_width = 0, dst_height = 0;
  double cos_a = 1.0, sin_a = 0.0;
  Point2 src_center, dst_center;

  Point2 to_dst(Point2 p) const noexcept {
    const double dx = p.x - src_center.x, dy = p.y - src_center.y;
    return {dx * cos_a + dy * sin_a + dst_center.x, -dx * sin_a + dy * cos_a + dst_center.y};
  }
  Point2 to_src(Point2 q) const noexcept {
    const double dx = q.x - dst_center.x, dy = q.y - dst_center.y;
    return {dx * cos_a - dy * sin_a + src_center.x, dx * sin_a + dy * cos_a + src_center.y};
  }
};

namespace detail {
inline double snap_unit(double v) noexcept {
  constexpr double eps = 1e-12;
  if (std::abs(v) < eps) return 0.0;
  if (std::abs(v - 1.0) < eps) return 1.0;
  if (std::abs(v + 1.0) < eps) return -1.0;
  return v;
}
}  // namespace detail

inline RotationTransform make_rotation(int src_width, int src_height, double angle) {
  if (!std::isfinite(angle)) throw Error(ErrorKind::invalid_input, "rotation angle must be finite");
  RotationTransform t;
  t.angle = angle;
  t.src_width = src_width;
  t.src_height = src_height;
  t.cos_a = detail::snap_unit(std::cos(angle));
  t.sin_a = detail::snap_unit(std::sin(angle));
  const double ac = std::abs(t.cos_a), as = std::abs(t.sin_a);
  constexpr double slack = 1e-9;
  t.dst_width = static_cast<int>(std::ceil(src_width * ac + src_height * as - slack));
  t.dst_height = static_cast<int>(std::ceil(src_width * as + src_height * ac - slack));
  t.src_center = {(src_width - 1) / 2.0, (src_height - 1) / 2.0};
  t.dst_center = {(t.dst_width - 1) / 2.0, (t.dst_height - 1) / 2.0};
  return t;
}

enum class Interp { nearest, bilinear };

/// Samples `img` at a real position; taps outside the raster read `fill`.
inline double sample(const GrayImage& img, Point2 p, Interp interp, double fill) noexcept {
  if (interp == Interp::nearest) {
    const int x = static_cast<int>(std::floor(p.x + 0.5));
    const int y = static_cast<int>(std::floor(p.y + 0.5));
    return img.contains(x, y) ? img(x, y) : fill;
  }
  const double fx0 = std::floor(p.x), fy0 = std::floor(p.y);
  if (fx0 < -1.0 || fy0 < -1.0 || fx0 > img.width() || fy0 > img.height()) return fill;
  const int x0 = static_cast<int>(fx0), y0 = static_cast<int>(fy0);
  const double fx = p.x - fx0, fy = p.y - fy0;
  auto tap = [&](int x, int y) { return img.contains(x, y) ? img(x, y) : fill; };
  const double top = tap(x0, y0) + fx * (tap(x0 + 1, y0) - tap(x0, y0));
  const double bottom = tap(x0, y0 + 1) + fx * (tap(x0 + 1, y0 + 1) - tap(x0, y0 + 1));
  return top + fy * (bottom - top);
}

struct Rotated {
  GrayImage image;
  RotationTransform transform;
};

inline Rotated rotate(const GrayImage& img, double angle, double fill, Interp interp) {
  Rotated r{{}, make_rotation(img.width(), img.height(), angle)};
  const auto& t = r.transform;
  r.image = GrayImage(t.dst_width, t.dst_height, fill);
  for (int y = 0; y < t.dst_height; ++y)
    for (int x = 0; x < t.dst_width; ++x)
      r.image(x, y) = sample(img, t.to_src({static_cast<double>(x), static_cast<double>(y)}), interp, fill);
  return r;
}

}  // namespace pencilflow

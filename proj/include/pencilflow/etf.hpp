#pragma once

// Edge tangent flow: gradients rotated by 90 degrees, then smoothed so that
// weak vectors follow strong neighbours. The smoothed field is bucketed into
// n_dirs stroke directions over the half circle [0, pi).

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "pencilflow/error.hpp"
#include "pencilflow/raster.hpp"

namespace pencilflow {

struct VectorField {
  int width = 0;
  int height = 0;
  std::vector<double> tx;
  std::vector<double> ty;
  std::vector<double> mag;  // gradient magnitude normalized to [0, 1]

  std::size_t index(int x, int y) const noexcept { return static_cast<std::size_t>(y) * width + x; }
};

inline VectorField init_etf(const GradientField& grad) {
  const std::size_t n = grad.magnitude.size();
  VectorField f{grad.width, grad.height, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                std::vector<double>(n, 0.0)};
  const double max_mag = n ? *std::max_element(grad.magnitude.begin(), grad.magnitude.end()) : 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double m = grad.magnitude[i];
    if (m > 0.0) {
      f.tx[i] = -grad.gy[i] / m;
      f.ty[i] = grad.gx[i] / m;
    }
    f.mag[i] = max_mag > 0.0 ? m / max_mag : 0.0;
  }
  return f;
}

/// Iterative smoothing over the (2r+1)^2 box. Each neighbour y of x
/// contributes sign(t(x).t(y)) * t(y) weighted by the magnitude term
/// (1 + tanh(mag(y) - mag(x))) / 2 and the alignment term |t(x).t(y)|.
/// A zero vector has no orientation to align with, so it takes the
/// magnitude-weighted mean of its neighbours instead. Sums that vanish keep
/// the previous vector.
inline VectorField refine_etf(const VectorField& field, int radius, int iterations) {
  if (radius < 1) throw Error(ErrorKind::config, "etf radius must be at least 1");
  if (iterations < 0) throw Error(ErrorKind::config, "etf iterations must be non-negative");
  VectorField cur = field;
  VectorField next = field;
  const int w = field.width, h = field.height;
  // tanh(a - b) = (tanh a - tanh b) / (1 - tanh a tanh b); mag is fixed
  // across iterations so tanh(mag) is computed once per pixel.
  std::vector<double> th(field.mag.size());
  std::transform(field.mag.begin(), field.mag.end(), th.begin(), [](double m) { return std::tanh(m); });
  for (int it = 0; it < iterations; ++it) {
    for (int y = 0; y < h; ++y) {
      const int y0 = std::max(0, y - radius), y1 = std::min(h - 1, y + radius);
      for (int x = 0; x < w; ++x) {
        const int x0 = std::max(0, x - radius), x1 = std::min(w - 1, x + radius);
        const std::size_t i = cur.index(x, y);
        const double tx = cur.tx[i], ty = cur.ty[i], th_x = th[i];
        const bool oriented = tx != 0.0 || ty != 0.0;
        double sx = 0.0, sy = 0.0;
        for (int yy = y0; yy <= y1; ++yy) {
          std::size_t j = cur.index(x0, yy);
          for (int xx = x0; xx <= x1; ++xx, ++j) {
            const double ux = cur.tx[j], uy = cur.ty[j];
            if (ux == 0.0 && uy == 0.0) continue;
            const double wm = 0.5 * (1.0 + (th[j] - th_x) / (1.0 - th[j] * th_x));
            // sign(dot) * |dot| == dot
            const double weight = oriented ? wm * (tx * ux + ty * uy) : wm;
            sx += weight * ux;
            sy += weight * uy;
          }
        }
        const double norm = std::sqrt(sx * sx + sy * sy);
        if (norm > 0.0) {
          next.tx[i] = sx / norm;
          next.ty[i] = sy / norm;
        } else {
          next.tx[i] = tx;
          next.ty[i] = ty;
        }
      }
    }
    std::swap(cur, next);
  }
  return cur;
}

/// Area division by tangent direction. Bucket k (0-based) holds directions
/// nearest to k * pi / n_dirs, measured modulo pi.
struct DirectionMasks {
  int n_dirs = 0;
  int width = 0;
  int height = 0;
  std::vector<int> label;  // bucket of each pixel, row-major

  double angle(int k) const noexcept { return k * std::numbers::pi / n_dirs; }

  std::size_t count(int k) const {
    return static_cast<std::size_t>(std::count(label.begin(), label.end(), k));
  }

  /// Binary mask of bucket k: 255 inside, 0 outside.
  GrayImage mask(int k) const {
    GrayImage m(width, height, 0.0);
    auto px = m.pixels();
    for (std::size_t i = 0; i < label.size(); ++i)
      if (label[i] == k) px[i] = 255.0;
    return m;
  }
};

/// Bucket of one tangent. Zero vectors go to bucket 0 (horizontal). The
/// vector is first folded onto the upper half plane so that t and -t produce
/// bit-identical angles.
inline int direction_bucket(double tx, double ty, int n_dirs) noexcept {
  if (tx == 0.0 && ty == 0.0) return 0;
  if (ty < 0.0 || (ty == 0.0 && tx < 0.0)) {
    tx = -tx;
    ty = -ty;
  }
  double a = std::atan2(ty, tx);  // [0, pi]
  if (a >= std::numbers::pi) a = 0.0;
  const double pos = a * n_dirs / std::numbers::pi;  // in bucket units
  const int lo = static_cast<int>(std::floor(pos));
  const int hi = lo + 1;
  const double d_lo = pos - lo, d_hi = hi - pos;
  if (d_hi < d_lo) return hi % n_dirs;
  if (d_lo < d_hi) return lo % n_dirs;
  return std::min(lo % n_dirs, hi % n_dirs);
}

inline DirectionMasks quantize_directions(const VectorField& field, int n_dirs) {
  if (n_dirs < 1) throw Error(ErrorKind::config, "direction count must be at least 1");
  DirectionMasks m{n_dirs, field.width, field.height, std::vector<int>(field.tx.size(), 0)};
  for (std::size_t i = 0; i < field.tx.size(); ++i) m.label[i] = direction_bucket(field.tx[i], field.ty[i], n_dirs);
  return m;
}

}  // namespace pencilflow

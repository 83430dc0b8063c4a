#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>

#include <nlohmann/json.hpp>

#include "pencilflow/error.hpp"

namespace pencilflow {

/// Parameters that affect rendered pixels. Paths and output switches live in
/// the pipeline Config.
struct RenderSettings {
  int stroke_width = 5;
  int n_dirs = 10;
  int n_gray_levels = 12;
  int etf_radius = 0;  // 0 = auto, see etf_radius_for
  int etf_iterations = 10;
  double clahe_clip = 2.0;
  int clahe_tiles_x = 8;
  int clahe_tiles_y = 8;
  int kernel_len_divisor = 30;

  bool operator==(const RenderSettings&) const = default;
};

/// Bumps an even stroke width to the next odd value and validates the rest.
/// Applying it twice gives the same result as applying it once.
inline RenderSettings normalize(RenderSettings s) {
  if (s.stroke_width < 3) throw Error(ErrorKind::config, "stroke width must be at least 3");
  if (s.stroke_width % 2 == 0) s.stroke_width += 1;
  if (s.n_dirs < 1) throw Error(ErrorKind::config, "direction count must be at least 1");
  if (s.n_gray_levels < 2 || s.n_gray_levels > 64)
    throw Error(ErrorKind::config, "gray level count must be in [2, 64]");
  if (s.etf_radius < 0) throw Error(ErrorKind::config, "etf radius must be positive (or 0 for auto)");
  if (s.etf_iterations < 0) throw Error(ErrorKind::config, "etf iterations must be non-negative");
  if (!(s.clahe_clip > 0.0)) throw Error(ErrorKind::config, "clahe clip limit must be positive");
  if (s.clahe_tiles_x < 1 || s.clahe_tiles_y < 1)
    throw Error(ErrorKind::config, "clahe tile grid must be at least 1x1");
  if (s.kernel_len_divisor < 1) throw Error(ErrorKind::config, "kernel length divisor must be at least 1");
  return s;
}

/// Smoothing radius actually used: the configured one, or for auto a radius
/// of 5 px per 512 px of the shorter image side (never below 5).
inline int etf_radius_for(const RenderSettings& s, int width, int height) {
  if (s.etf_radius > 0) return s.etf_radius;
  const double shorter = std::min(width, height);
  return std::max(5, static_cast<int>(std::lround(5.0 * shorter / 512.0)));
}

inline void to_json(nlohmann::json& j, const RenderSettings& s) {
  j = nlohmann::json{{"stroke_width", s.stroke_width},
                     {"n_dirs", s.n_dirs},
                     {"n_gray_levels", s.n_gray_levels},
                     {"etf_radius", s.etf_radius},
                     {"etf_iterations", s.etf_iterations},
                     {"clahe_clip", s.clahe_clip},
                     {"clahe_tiles", {s.clahe_tiles_x, s.clahe_tiles_y}},
                     {"kernel_len_divisor", s.kernel_len_divisor}};
}

inline void from_json(const nlohmann::json& j, RenderSettings& s) {
  j.at("stroke_width").get_to(s.stroke_width);
  j.at("n_dirs").get_to(s.n_dirs);
  j.at("n_gray_levels").get_to(s.n_gray_levels);
  j.at("etf_radius").get_to(s.etf_radius);
  j.at("etf_iterations").get_to(s.etf_iterations);
  j.at("clahe_clip").get_to(s.clahe_clip);
  j.at("clahe_tiles").at(0).get_to(s.clahe_tiles_x);
  j.at("clahe_tiles").at(1).get_to(s.clahe_tiles_y);
  j.at("kernel_len_divisor").get_to(s.kernel_len_divisor);
}

/// FNV-1a over the canonical JSON dump, as 16 hex digits.
inline std::string config_hash(const RenderSettings& s) {
  const std::string text = nlohmann::json(s).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace pencilflow

#pragma once

// End-to-end orchestration: photo in, pencil drawing, stroke log and
// drawing-process frames out.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "pencilflow/error.hpp"
#include "pencilflow/etf.hpp"
#include "pencilflow/image_io.hpp"
#include "pencilflow/process.hpp"
#include "pencilflow/raster.hpp"
#include "pencilflow/renderer.hpp"
#include "pencilflow/settings.hpp"

namespace pencilflow {

struct Config {
  std::string input_path;
  std::string output_path;
  RenderSettings settings;
  std::uint64_t seed = 0;
  std::size_t frame_every = 0;  // 0 = no frames
  std::string frames_dir;
  std::string log_path;
  std::string debug_dir;
  std::string from_log;  // replay this log instead of searching
  bool colorize = false;
};

/// Every stage that precedes the stroke search, computed on one gray image.
struct Guidance {
  GrayImage enhanced;   // CLAHE output; strokes, ETF and scores all use it
  GradientField grad;
  VectorField etf;
  DirectionMasks masks;
  Quantized quantized;
  GrayImage edges;      // T in [0, 1]
};

inline Guidance prepare_guidance(const GrayImage& gray, const RenderSettings& settings) {
  const RenderSettings s = normalize(settings);
  Guidance g;
  g.enhanced = clahe(gray, s.clahe_clip, s.clahe_tiles_x, s.clahe_tiles_y);
  g.grad = gradient(g.enhanced);
  g.etf = refine_etf(init_etf(g.grad), etf_radius_for(s, gray.width(), gray.height()), s.etf_iterations);
  g.masks = quantize_directions(g.etf, s.n_dirs);
  g.quantized = quantize(g.enhanced, s.n_gray_levels);
  g.edges = edge_map(g.grad, s.n_dirs,
                     default_kernel_len(gray.width(), gray.height(), s.kernel_len_divisor));
  return g;
}

/// Search, extension and ordering. The returned log has a complete header.
inline StrokeLog plan_strokes(const Guidance& g, const RenderSettings& settings, std::uint64_t seed) {
  const RenderSettings s = normalize(settings);
  auto specs = extend_strokes(
      search_strokes(g.quantized.image, g.masks, g.quantized.levels, s.stroke_width, seed));
  StrokeLog log = reorder(std::move(specs), g.grad);
  log.header.config = s;
  log.header.config_hash = config_hash(s);
  log.header.seed = seed;
  return log;
}

/// Replaces the luma of `original` with `result` (BT.601 YUV).
inline RgbImage colorize(const RgbImage& original, const GrayImage& result) {
  if (original.width != result.width() || original.height != result.height())
    throw Error(ErrorKind::invalid_input, "colorize: image sizes differ");
  RgbImage out(original.width, original.height);
  auto channel = [](double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0))); };
  for (int y = 0; y < original.height; ++y) {
    for (int x = 0; x < original.width; ++x) {
      const auto [r, g, b] = original.at(x, y);
      const double u = -0.14713 * r - 0.28886 * g + 0.436 * b;
      const double v = 0.615 * r - 0.51499 * g - 0.10001 * b;
      const double luma = result(x, y);
      out.set(x, y, {channel(luma + 1.13983 * v), channel(luma - 0.39465 * u - 0.58060 * v),
                     channel(luma + 2.03211 * u)});
    }
  }
  return out;
}

/// Tangent angle (mod pi) as hue, normalized magnitude as value.
inline RgbImage etf_visualization(const VectorField& f) {
  RgbImage out(f.width, f.height);
  for (int y = 0; y < f.height; ++y) {
    for (int x = 0; x < f.width; ++x) {
      const std::size_t i = f.index(x, y);
      double a = std::atan2(f.ty[i], f.tx[i]);
      if (a < 0.0) a += std::numbers::pi;
      const double hue = 6.0 * std::fmod(a / std::numbers::pi, 1.0);
      const double val = 0.25 + 0.75 * f.mag[i];
      const int sector = static_cast<int>(hue) % 6;
      const double frac = hue - std::floor(hue);
      const double p = 0.0, q = 1.0 - frac, t = frac;
      double rgb[3];
      switch (sector) {
        case 0: rgb[0] = 1; rgb[1] = t; rgb[2] = p; break;
        case 1: rgb[0] = q; rgb[1] = 1; rgb[2] = p; break;
        case 2: rgb[0] = p; rgb[1] = 1; rgb[2] = t; break;
        case 3: rgb[0] = p; rgb[1] = q; rgb[2] = 1; break;
        case 4: rgb[0] = t; rgb[1] = p; rgb[2] = 1; break;
        default: rgb[0] = 1; rgb[1] = p; rgb[2] = q; break;
      }
      out.set(x, y, {to_byte(255.0 * val * rgb[0]), to_byte(255.0 * val * rgb[1]), to_byte(255.0 * val * rgb[2])});
    }
  }
  return out;
}

inline std::string frame_path(const std::string& dir, std::size_t index) {
  char name[32];
  std::snprintf(name, sizeof name, "frame_%06zu.png", index);
  return (std::filesystem::path(dir) / name).string();
}

namespace detail {
inline void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create directory " + dir + ": " + ec.message());
}

// ETF, quantized image, area masks, per-direction stroke canvases, aggregate and edge map.
inline void write_debug(const std::string& dir, const Guidance& g, const StrokeLog& log) {
  namespace fs = std::filesystem;
  ensure_dir(dir);
  auto at = [&](const std::string& name) { return (fs::path(dir) / name).string(); };
  save_png(at("etf.png"), etf_visualization(g.etf));
  save_png(at("quantized.png"), g.quantized.image);
  save_png(at("edges.png"), g.edges, 255.0);
  const int w = log.header.width, h = log.header.height;
  std::vector<GrayImage> per_dir(static_cast<std::size_t>(g.masks.n_dirs), GrayImage(w, h, 255.0));
  GrayImage all(w, h, 255.0);
  for (const LogEntry& e : log.entries) {
    const PlacedStroke p = render_stroke(e.spec, w, h);
    composite_min(per_dir[static_cast<std::size_t>(e.spec.dir_index)], p);
    composite_min(all, p);
  }
  char name[32];
  for (int k = 0; k < g.masks.n_dirs; ++k) {
    std::snprintf(name, sizeof name, "area_%02d.png", k);
    save_png(at(name), g.masks.mask(k));
    std::snprintf(name, sizeof name, "strokes_%02d.png", k);
    save_png(at(name), per_dir[static_cast<std::size_t>(k)]);
  }
  save_png(at("aggregate.png"), all);
}
}  // namespace detail

struct PipelineResult {
  GrayImage result;
  std::optional<RgbImage> color;
  StrokeLog log;
  std::size_t frames_written = 0;
};

inline PipelineResult run_pipeline(const Config& cfg) {
  const RenderSettings settings = normalize(cfg.settings);
  if (cfg.output_path.empty()) throw Error(ErrorKind::config, "no output path given");
  if (cfg.frame_every > 0 && cfg.frames_dir.empty())
    throw Error(ErrorKind::config, "frame output requested without a frames directory");

  const RgbImage input = load_rgb(cfg.input_path);
  const Guidance guidance = prepare_guidance(to_grayscale(input), settings);

  PipelineResult out;
  if (!cfg.from_log.empty()) {
    out.log = read_log(cfg.from_log);
    if (out.log.header.width != input.width || out.log.header.height != input.height)
      throw Error(ErrorKind::invalid_input, "stroke log was recorded for a different image size");
  } else {
    out.log = plan_strokes(guidance, settings, cfg.seed);
  }

  FrameSink sink;
  if (cfg.frame_every > 0) {
    detail::ensure_dir(cfg.frames_dir);
    sink = [&](std::size_t index, std::size_t, const GrayImage& frame) {
      save_png(frame_path(cfg.frames_dir, index), frame);
      ++out.frames_written;
    };
  }
  out.result = replay(out.log, guidance.edges, cfg.frame_every, sink);

  if (cfg.colorize) {
    out.color = colorize(input, out.result);
    save_png(cfg.output_path, *out.color);
  } else {
    save_png(cfg.output_path, out.result);
  }
  if (!cfg.log_path.empty()) write_log(out.log, cfg.log_path);
  if (!cfg.debug_dir.empty()) detail::write_debug(cfg.debug_dir, guidance, out.log);
  return out;
}

}  // namespace pencilflow

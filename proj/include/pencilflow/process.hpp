#pragma once

// Drawing-order reconstruction: strokes are scored by how dark they are and
// how much edge they cover, drawn strongest first, and the sequence is
// persisted as a line-delimited log that can be replayed into frames.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pencilflow/error.hpp"
#include "pencilflow/raster.hpp"
#include "pencilflow/renderer.hpp"
#include "pencilflow/settings.hpp"

namespace pencilflow {

inline constexpr const char* kLogSchema = "pencilflow-log/1";

/// S = (255 - G) * sum of gradient magnitude over the pixels that the
/// rendered stroke darkens (value < 255).
inline double importance(const StrokeSpec& spec, const GradientField& grad) {
  if (spec.gray >= 255.0) return 0.0;
  const PlacedStroke placed = render_stroke(spec, grad.width, grad.height);
  double covered = 0.0;
  const GrayImage& p = placed.patch;
  for (int y = 0; y < p.height(); ++y)
    for (int x = 0; x < p.width(); ++x)
      if (p(x, y) < 255.0) covered += grad.mag(placed.x0 + x, placed.y0 + y);
  return (255.0 - spec.gray) * covered;
}

struct LogHeader {
  std::string schema = kLogSchema;
  RenderSettings config;
  std::string config_hash;
  std::uint64_t seed = 0;
  int width = 0;
  int height = 0;
  std::size_t n_strokes = 0;

  bool operator==(const LogHeader&) const = default;
};

struct LogEntry {
  std::size_t order = 0;
  StrokeSpec spec;

  bool operator==(const LogEntry&) const = default;
};

struct StrokeLog {
  LogHeader header;
  std::vector<LogEntry> entries;

  bool operator==(const StrokeLog&) const = default;
};

/// Scores every stroke and sorts by importance, highest first; equal scores
/// keep search order. Header dimensions come from the gradient field.
inline StrokeLog reorder(std::vector<StrokeSpec> specs, const GradientField& grad) {
  for (StrokeSpec& s : specs) s.importance = importance(s, grad);
  std::stable_sort(specs.begin(), specs.end(),
                   [](const StrokeSpec& a, const StrokeSpec& b) { return a.importance > b.importance; });
  StrokeLog log;
  log.header.width = grad.width;
  log.header.height = grad.height;
  log.header.n_strokes = specs.size();
  log.entries.reserve(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) log.entries.push_back({i, specs[i]});
  return log;
}

/// Throws corrupt_log naming `index` if the entry cannot be rendered under
/// the header's settings.
inline void validate_entry(const LogEntry& e, std::size_t index, const LogHeader& header) {
  const StrokeSpec& s = e.spec;
  auto fail = [index](const std::string& why) {
    throw Error(ErrorKind::corrupt_log, "stroke " + std::to_string(index) + ": " + why, index);
  };
  if (e.order != index) fail("order index out of sequence");
  if (!(s.gray >= 0.0 && s.gray <= 255.0)) fail("gray outside [0, 255]");
  if (s.width < 3 || s.width % 2 == 0) fail("stroke width must be odd and at least 3");
  if (s.length < 1) fail("length must be at least 1");
  if (s.ext_length < s.length) fail("drawn length shorter than searched length");
  if (!std::isfinite(s.angle)) fail("angle is not finite");
  if (!std::isfinite(s.importance) || s.importance < 0.0) fail("importance must be finite and non-negative");
  const int n_dirs = header.config.n_dirs;
  if (n_dirs >= 1) {
    if (s.dir_index < 0 || s.dir_index >= n_dirs) fail("direction index out of range");
    const double expected = s.dir_index * std::numbers::pi / n_dirs;
    if (std::abs(s.angle - expected) > 1e-12) fail("angle does not match direction index");
  }
}

/// Receives (frame number from 1, strokes drawn so far, canvas * T).
using FrameSink = std::function<void(std::size_t, std::size_t, const GrayImage&)>;

/// Draws the log stroke by stroke onto a white canvas. With frame_every > 0 a
/// frame is emitted after every frame_every strokes and after the final
/// stroke (an empty log emits its single blank frame). Returns canvas * T.
inline GrayImage replay(const StrokeLog& log, const GrayImage& edges, std::size_t frame_every,
                        const FrameSink& emit = {}) {
  const int w = log.header.width, h = log.header.height;
  if (edges.width() != w || edges.height() != h)
    throw Error(ErrorKind::invalid_input, "edge map does not match the log dimensions");
  GrayImage canvas(w, h, 255.0);
  std::size_t frames = 0;
  const std::size_t n = log.entries.size();
  for (std::size_t i = 0; i < n; ++i) {
    validate_entry(log.entries[i], i, log.header);
    composite_min(canvas, render_stroke(log.entries[i].spec, w, h));
    const std::size_t drawn = i + 1;
    if (frame_every > 0 && emit && (drawn % frame_every == 0 || drawn == n))
      emit(++frames, drawn, compose_final(canvas, edges));
  }
  GrayImage result = compose_final(canvas, edges);
  if (frame_every > 0 && emit && n == 0) emit(1, 0, result);
  return result;
}

/// Batch composition of the whole log: aggregate every stroke, apply T once.
inline GrayImage compose_batch(const StrokeLog& log, const GrayImage& edges) {
  std::vector<PlacedStroke> placed;
  placed.reserve(log.entries.size());
  for (std::size_t i = 0; i < log.entries.size(); ++i) {
    validate_entry(log.entries[i], i, log.header);
    placed.push_back(render_stroke(log.entries[i].spec, log.header.width, log.header.height));
  }
  return compose_final(aggregate(placed, log.header.width, log.header.height), edges);
}

// ---- serialization --------------------------------------------------------

inline nlohmann::json header_json(const LogHeader& h) {
  return {{"schema", h.schema}, {"config", h.config}, {"config_hash", h.config_hash}, {"seed", h.seed},
          {"width", h.width},   {"height", h.height}, {"n_strokes", h.n_strokes}};
}

inline nlohmann::json entry_json(const LogEntry& e) {
  const StrokeSpec& s = e.spec;
  return {{"order", e.order},   {"dir", s.dir_index},       {"angle", s.angle}, {"gray", s.gray},
          {"width", s.width},   {"length", s.length},       {"ext_length", s.ext_length},
          {"row", s.row_rot},   {"col", s.col_rot},         {"rng", s.rng_cursor},
          {"S", s.importance}};
}

inline void write_log(const StrokeLog& log, std::ostream& out) {
  LogHeader h = log.header;
  h.n_strokes = log.entries.size();
  out << header_json(h).dump() << '\n';
  for (const LogEntry& e : log.entries) out << entry_json(e).dump() << '\n';
}

inline void write_log(const StrokeLog& log, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot open stroke log for writing: " + path);
  write_log(log, out);
  out.flush();
  if (!out) throw Error(ErrorKind::io, "failed writing stroke log: " + path);
}

inline StrokeLog read_log(std::istream& in) {
  StrokeLog log;
  std::string line;
  std::size_t line_no = 0;
  auto parse_error = [&line_no](const std::string& why) {
    return Error(ErrorKind::parse, "line " + std::to_string(line_no) + ": " + why, line_no);
  };

  if (!std::getline(in, line)) throw Error(ErrorKind::parse, "line 1: missing header", 1);
  line_no = 1;
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(e.what());
  }
  if (!header.is_object() || !header.contains("schema") || !header["schema"].is_string())
    throw parse_error("header has no schema field");
  if (header["schema"].get<std::string>() != kLogSchema)
    throw Error(ErrorKind::version,
                "unsupported log schema '" + header["schema"].get<std::string>() + "', expected " + kLogSchema, 1);
  try {
    log.header.schema = header.at("schema").get<std::string>();
    log.header.config = header.at("config").get<RenderSettings>();
    log.header.config_hash = header.at("config_hash").get<std::string>();
    log.header.seed = header.at("seed").get<std::uint64_t>();
    log.header.width = header.at("width").get<int>();
    log.header.height = header.at("height").get<int>();
    log.header.n_strokes = header.at("n_strokes").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(e.what());
  }

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const nlohmann::json j = nlohmann::json::parse(line);
      LogEntry e;
      StrokeSpec& s = e.spec;
      j.at("order").get_to(e.order);
      j.at("dir").get_to(s.dir_index);
      j.at("angle").get_to(s.angle);
      j.at("gray").get_to(s.gray);
      j.at("width").get_to(s.width);
      j.at("length").get_to(s.length);
      j.at("ext_length").get_to(s.ext_length);
      j.at("row").get_to(s.row_rot);
      j.at("col").get_to(s.col_rot);
      j.at("rng").get_to(s.rng_cursor);
      j.at("S").get_to(s.importance);
      log.entries.push_back(e);
    } catch (const nlohmann::json::exception& e) {
      throw parse_error(e.what());
    }
  }
  if (log.entries.size() != log.header.n_strokes)
    throw Error(ErrorKind::parse,
                "header declares " + std::to_string(log.header.n_strokes) + " strokes but " +
                    std::to_string(log.entries.size()) + " were read",
                line_no);
  return log;
}

inline StrokeLog read_log(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open stroke log: " + path);
  return read_log(in);
}

}  // namespace pencilflow

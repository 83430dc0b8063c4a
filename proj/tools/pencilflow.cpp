// pencilflow: render a photo as a pencil drawing with its drawing process.

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "pencilflow/pipeline.hpp"

namespace {

int exit_code(pencilflow::ErrorKind kind) {
  using pencilflow::ErrorKind;
  switch (kind) {
    case ErrorKind::config: return 2;
    case ErrorKind::io: return 3;
    case ErrorKind::invalid_input: return 4;
    case ErrorKind::parse: return 5;
    case ErrorKind::version: return 6;
    case ErrorKind::corrupt_log: return 7;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  pencilflow::Config cfg;
  auto& s = cfg.settings;

  CLI::App app{"Render a photograph as a pencil drawing built from individual strokes"};
  app.add_option("input", cfg.input_path, "Input PNG or JPEG")->required();
  app.add_option("-o,--output", cfg.output_path, "Output PNG")->required();
  app.add_option("--width", s.stroke_width, "Stroke width in pixels (even values are bumped to odd)")
      ->capture_default_str();
  app.add_option("--dirs", s.n_dirs, "Number of stroke directions")->capture_default_str();
  app.add_option("--levels", s.n_gray_levels, "Number of gray levels (2-64)")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Master random seed")->capture_default_str();
  app.add_option("--etf-radius", s.etf_radius, "Edge tangent flow smoothing radius (0 = scale with image size)")->capture_default_str();
  app.add_option("--etf-iters", s.etf_iterations, "Edge tangent flow iterations")->capture_default_str();
  app.add_option("--clahe-clip", s.clahe_clip, "CLAHE clip limit")->capture_default_str();
  app.add_option("--kernel-divisor", s.kernel_len_divisor, "Edge kernel length = min(H, W) / divisor")
      ->capture_default_str();
  auto* frames = app.add_option("--frame-every", cfg.frame_every, "Emit a frame every N strokes");
  app.add_option("--frames-dir", cfg.frames_dir, "Directory for numbered frame PNGs")->needs(frames);
  app.add_option("--log", cfg.log_path, "Write the stroke log here");
  app.add_option("--from-log", cfg.from_log, "Replay an existing stroke log instead of searching");
  app.add_flag("--color", cfg.colorize, "Colorize the result with the input's chroma");
  app.add_option("--debug-dir", cfg.debug_dir, "Write intermediate images here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    const auto result = pencilflow::run_pipeline(cfg);
    std::cout << "strokes: " << result.log.entries.size() << "\n";
    if (result.frames_written) std::cout << "frames: " << result.frames_written << "\n";
  } catch (const pencilflow::Error& e) {
    std::cerr << "error[" << pencilflow::to_string(e.kind()) << "]: " << e.what() << "\n";
    return exit_code(e.kind());
  }
  return 0;
}

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iterator>

#include "pencilflow/pipeline.hpp"
#include "support/oracles.hpp"

using namespace pencilflow;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class PipelineDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("pencilflow_test_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    RgbImage img(40, 32);
    const GrayImage g = fixture::random_image(40, 32, 31);
    for (int y = 0; y < 32; ++y)
      for (int x = 0; x < 40; ++x) {
        const std::uint8_t v = to_byte(g(x, y));
        img.set(x, y, {v, static_cast<std::uint8_t>(255 - v), static_cast<std::uint8_t>(x * 6)});
      }
    save_png(path("in.png"), img);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  Config config(const std::string& tag) const {
    Config c;
    c.input_path = path("in.png");
    c.output_path = path(tag + ".png");
    c.log_path = path(tag + ".jsonl");
    c.seed = 3;
    c.settings.etf_radius = 2;
    c.settings.etf_iterations = 2;
    return c;
  }

  fs::path dir_;
};

}  // namespace

TEST(Settings, NormalizeIsIdempotent) {
  RenderSettings s;
  s.stroke_width = 6;
  const RenderSettings once = normalize(s);
  EXPECT_EQ(once.stroke_width, 7);
  EXPECT_EQ(normalize(once), once);
  EXPECT_EQ(normalize(RenderSettings{}), RenderSettings{});
}

TEST(Settings, Validation) {
  auto bad = [](auto mutate) {
    RenderSettings s;
    mutate(s);
    try {
      normalize(s);
      ADD_FAILURE() << "accepted";
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::config);
    }
  };
  bad([](RenderSettings& s) { s.stroke_width = 1; });
  bad([](RenderSettings& s) { s.n_dirs = 0; });
  bad([](RenderSettings& s) { s.n_gray_levels = 1; });
  bad([](RenderSettings& s) { s.n_gray_levels = 65; });
  bad([](RenderSettings& s) { s.etf_radius = -1; });
  bad([](RenderSettings& s) { s.etf_iterations = -1; });
  bad([](RenderSettings& s) { s.clahe_clip = 0.0; });
  bad([](RenderSettings& s) { s.clahe_tiles_y = 0; });
  bad([](RenderSettings& s) { s.kernel_len_divisor = 0; });
}

TEST(Settings, AutoEtfRadius) {
  RenderSettings s;
  EXPECT_EQ(etf_radius_for(s, 512, 512), 5);
  EXPECT_EQ(etf_radius_for(s, 256, 256), 5);
  EXPECT_EQ(etf_radius_for(s, 1024, 1024), 10);
  EXPECT_EQ(etf_radius_for(s, 2000, 768), 8);
  s.etf_radius = 3;
  EXPECT_EQ(etf_radius_for(s, 1024, 1024), 3);
}

TEST(Settings, JsonRoundTripAndHash) {
  RenderSettings s;
  s.clahe_clip = 2.7;
  s.clahe_tiles_x = 4;
  const RenderSettings back = nlohmann::json(s).get<RenderSettings>();
  EXPECT_EQ(back, s);
  const std::string h = config_hash(s);
  EXPECT_EQ(h.size(), 16u);
  EXPECT_EQ(h, config_hash(back));
  EXPECT_NE(h, config_hash(RenderSettings{}));
}

TEST(Colorize, GrayInputKeepsLuma) {
  RgbImage gray(3, 1);
  for (int x = 0; x < 3; ++x) gray.set(x, 0, {128, 128, 128});
  GrayImage luma(3, 1, 0.0);
  luma(0, 0) = 0.0;
  luma(1, 0) = 77.0;
  luma(2, 0) = 255.0;
  const RgbImage out = colorize(gray, luma);
  EXPECT_EQ(out.at(0, 0), (std::array<std::uint8_t, 3>{0, 0, 0}));
  EXPECT_EQ(out.at(1, 0), (std::array<std::uint8_t, 3>{77, 77, 77}));
  EXPECT_EQ(out.at(2, 0), (std::array<std::uint8_t, 3>{255, 255, 255}));
}

TEST(Colorize, OriginalLumaReproducesColour) {
  RgbImage img(4, 1);
  img.set(0, 0, {200, 30, 40});
  img.set(1, 0, {20, 180, 90});
  img.set(2, 0, {60, 70, 220});
  img.set(3, 0, {140, 140, 40});
  GrayImage y(4, 1, 0.0);
  for (int x = 0; x < 4; ++x) {
    const auto [r, g, b] = img.at(x, 0);
    y(x, 0) = 0.299 * r + 0.587 * g + 0.114 * b;
  }
  const RgbImage out = colorize(img, y);
  for (int x = 0; x < 4; ++x)
    for (int c = 0; c < 3; ++c) EXPECT_NEAR(out.at(x, 0)[c], img.at(x, 0)[c], 1);
  EXPECT_THROW(colorize(img, GrayImage(3, 1, 0.0)), Error);
}

TEST(FramePath, ZeroPadded) {
  EXPECT_EQ(frame_path("out", 7), (fs::path("out") / "frame_000007.png").string());
}

TEST_F(PipelineDir, DeterministicOutputs) {
  const PipelineResult a = run_pipeline(config("a"));
  const PipelineResult b = run_pipeline(config("b"));
  EXPECT_FALSE(a.log.entries.empty());
  EXPECT_EQ(slurp(path("a.png")), slurp(path("b.png")));
  EXPECT_EQ(slurp(path("a.jsonl")), slurp(path("b.jsonl")));
  Config other = config("c");
  other.seed = 4;
  run_pipeline(other);
  EXPECT_NE(slurp(path("a.jsonl")), slurp(path("c.jsonl")));
}

TEST_F(PipelineDir, FramesOnlyWhenRequested) {
  Config c = config("plain");
  c.frames_dir = path("frames_none");
  EXPECT_EQ(run_pipeline(c).frames_written, 0u);
  EXPECT_FALSE(fs::exists(c.frames_dir));

  c.frame_every = 25;
  c.frames_dir = path("frames");
  const PipelineResult r = run_pipeline(c);
  const std::size_t n = r.log.entries.size();
  EXPECT_EQ(r.frames_written, (n + 24) / 25);
  EXPECT_TRUE(fs::exists(frame_path(c.frames_dir, 1)));
  EXPECT_TRUE(fs::exists(frame_path(c.frames_dir, r.frames_written)));
  EXPECT_EQ(slurp(frame_path(c.frames_dir, r.frames_written)), slurp(c.output_path));
}

TEST_F(PipelineDir, ReplayFromLogMatches) {
  run_pipeline(config("orig"));
  Config c = config("again");
  c.log_path.clear();
  c.from_log = path("orig.jsonl");
  run_pipeline(c);
  EXPECT_EQ(slurp(path("orig.png")), slurp(path("again.png")));
}

TEST_F(PipelineDir, ColourAndDebugOutputs) {
  Config c = config("colour");
  c.colorize = true;
  c.debug_dir = path("debug");
  const PipelineResult r = run_pipeline(c);
  ASSERT_TRUE(r.color.has_value());
  EXPECT_EQ(load_rgb(c.output_path), *r.color);
  for (const char* f : {"etf.png", "quantized.png", "edges.png", "aggregate.png", "area_00.png", "strokes_09.png"})
    EXPECT_TRUE(fs::exists(fs::path(c.debug_dir) / f)) << f;
}

TEST_F(PipelineDir, ErrorKinds) {
  auto kind_of = [](const Config& c) {
    try {
      run_pipeline(c);
    } catch (const Error& e) {
      return e.kind();
    }
    ADD_FAILURE() << "pipeline succeeded";
    return ErrorKind::invalid_input;
  };
  Config missing = config("x");
  missing.input_path = path("nope.png");
  EXPECT_EQ(kind_of(missing), ErrorKind::io);

  Config frames = config("x");
  frames.frame_every = 5;
  EXPECT_EQ(kind_of(frames), ErrorKind::config);

  Config width = config("x");
  width.settings.stroke_width = 2;
  EXPECT_EQ(kind_of(width), ErrorKind::config);

  StrokeLog other;
  other.header.width = 10;
  other.header.height = 10;
  write_log(other, path("other.jsonl"));
  Config mismatch = config("x");
  mismatch.from_log = path("other.jsonl");
  EXPECT_EQ(kind_of(mismatch), ErrorKind::invalid_input);

  std::ofstream(path("junk.png")) << "not an image";
  Config junk = config("x");
  junk.input_path = path("junk.png");
  EXPECT_EQ(kind_of(junk), ErrorKind::io);
}

TEST(DrawingOrder, ImportanceConcentratesEarly) {
  for (const char* name : {"astronaut_256.png", "coffee_256.png", "chelsea_256.png", "astronaut_512.png",
                           "portrait_1024.png"}) {
    const RenderSettings s;
    const Guidance g =
        prepare_guidance(to_grayscale(load_rgb((fs::path(PENCILFLOW_SAMPLES_DIR) / name).string())), s);
    const StrokeLog log = plan_strokes(g, s, 1);
    ASSERT_GT(log.entries.size(), 10u) << name;
    double total = 0.0, head = 0.0;
    const std::size_t cut = log.entries.size() / 5;
    for (std::size_t i = 0; i < log.entries.size(); ++i) {
      total += log.entries[i].spec.importance;
      if (i < cut) head += log.entries[i].spec.importance;
    }
    EXPECT_GE(head, 0.5 * total) << name << ": first 20% of strokes carry " << 100.0 * head / total << "%";
  }
}

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "pencilflow/raster.hpp"
#include "support/oracles.hpp"

using namespace pencilflow;

namespace {

RgbImage solid(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  RgbImage img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) img.set(x, y, {r, g, b});
  return img;
}

}  // namespace

TEST(Grayscale, FixedPointsAndLuma) {
  EXPECT_DOUBLE_EQ(to_grayscale(solid(2, 2, 255, 255, 255))(1, 1), 255.0);
  EXPECT_DOUBLE_EQ(to_grayscale(solid(2, 2, 0, 0, 0))(0, 0), 0.0);
  EXPECT_NEAR(to_grayscale(solid(1, 1, 255, 0, 0))(0, 0), 76.245, 1e-9);
}

TEST(Grayscale, EmptyInputIsAnError) {
  try {
    to_grayscale(RgbImage{});
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_input);
    EXPECT_STREQ(e.what(), "empty input");
  }
}

TEST(Clahe, ConstantImageStaysConstant) {
  const GrayImage out = clahe(GrayImage(64, 48, 128.0), 2.0, 8, 8);
  const auto [lo, hi] = std::minmax_element(out.pixels().begin(), out.pixels().end());
  EXPECT_NEAR(*lo, *hi, 1e-9);
}

TEST(Clahe, TwoToneGlobalEqualization) {
  // 50 on the left half, 200 on the right: the cumulative histogram reaches
  // 1/2 at bin 50 and 1 at bin 200, so the mapping is 127.5 and 255.
  GrayImage img(16, 8, 50.0);
  for (int y = 0; y < 8; ++y)
    for (int x = 8; x < 16; ++x) img(x, y) = 200.0;
  const GrayImage out = clahe(img, 1e9, 1, 1);
  EXPECT_DOUBLE_EQ(out(0, 0), 127.5);
  EXPECT_DOUBLE_EQ(out(15, 7), 255.0);
}

TEST(Clahe, OutputStaysInRange) {
  for (unsigned seed = 0; seed < 5; ++seed) {
    const GrayImage out = clahe(fixture::random_image(70, 53, seed), 2.0, 8, 8);
    for (double v : out.pixels()) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 255.0);
    }
  }
}

TEST(Clahe, SmallImageFallsBackToGlobal) {
  const GrayImage img = fixture::random_image(5, 4, 3);
  EXPECT_EQ(clahe(img, 2.0, 8, 8), clahe(img, 2.0, 1, 1));
}

TEST(Clahe, RejectsBadParameters) {
  EXPECT_THROW(clahe(GrayImage(4, 4), 0.0, 1, 1), Error);
  EXPECT_THROW(clahe(GrayImage(4, 4), 2.0, 0, 1), Error);
}

TEST(Quantize, NearestLevelExamples) {
  GrayImage img(4, 1, 0.0);
  img(0, 0) = 100.0;
  img(1, 0) = 0.0;
  img(2, 0) = 255.0;
  img(3, 0) = 127.5;  // exactly halfway between 0 and 255
  const Quantized two = quantize(img, 2);
  EXPECT_EQ(two.levels, (std::vector<double>{0.0, 255.0}));
  EXPECT_EQ(two.image(0, 0), 0.0);
  EXPECT_EQ(two.image(1, 0), 0.0);
  EXPECT_EQ(two.image(2, 0), 255.0);
  EXPECT_EQ(two.image(3, 0), 0.0) << "ties go to the darker level";

  GrayImage mid(1, 1, 128.0);
  const Quantized three = quantize(mid, 3);
  EXPECT_EQ(three.levels, (std::vector<double>{0.0, 128.0, 255.0}));
  EXPECT_EQ(three.image(0, 0), 128.0);
}

TEST(Quantize, EndpointsAreLevelsForEveryCount) {
  GrayImage img(2, 1, 0.0);
  img(1, 0) = 255.0;
  for (int n = 2; n <= 64; ++n) {
    const Quantized q = quantize(img, n);
    EXPECT_EQ(q.image(0, 0), 0.0);
    EXPECT_EQ(q.image(1, 0), 255.0);
  }
}

TEST(Quantize, IdempotentAndClosedOverLevels) {
  for (int n : {2, 5, 8, 12, 16, 64}) {
    const GrayImage img = fixture::random_image(40, 30, 17u + n);
    const Quantized q = quantize(img, n);
    EXPECT_EQ(quantize(q.image, n).image, q.image);
    std::set<double> distinct(q.image.pixels().begin(), q.image.pixels().end());
    EXPECT_LE(distinct.size(), static_cast<std::size_t>(n));
    for (double v : distinct) EXPECT_TRUE(std::binary_search(q.levels.begin(), q.levels.end(), v));
  }
}

TEST(Quantize, LevelCountOutOfRange) {
  EXPECT_THROW(quantize(GrayImage(2, 2), 1), Error);
  EXPECT_THROW(quantize(GrayImage(2, 2), 65), Error);
}

TEST(Gradient, ConstantImageHasNoGradient) {
  const GradientField g = gradient(GrayImage(9, 7, 80.0));
  for (std::size_t i = 0; i < g.magnitude.size(); ++i) {
    EXPECT_EQ(g.gx[i], 0.0);
    EXPECT_EQ(g.gy[i], 0.0);
    EXPECT_EQ(g.magnitude[i], 0.0);
  }
}

TEST(Gradient, VerticalStep) {
  GrayImage img(6, 4, 0.0);
  for (int y = 0; y < 4; ++y)
    for (int x = 3; x < 6; ++x) img(x, y) = 255.0;
  const GradientField g = gradient(img);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 6; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * 6 + x;
      EXPECT_EQ(g.gx[i], x == 2 ? 255.0 : 0.0);
      EXPECT_EQ(g.gy[i], 0.0);
    }
    EXPECT_EQ(g.mag(2, y), 255.0);
  }
}

TEST(Gradient, LinearInIntensity) {
  const GrayImage img = fixture::random_image(13, 11, 5, 0.0, 100.0);
  GrayImage scaled = img;
  for (double& v : scaled.pixels()) v *= 2.5;
  const GradientField a = gradient(img), b = gradient(scaled);
  for (std::size_t i = 0; i < a.gx.size(); ++i) {
    EXPECT_NEAR(b.gx[i], 2.5 * a.gx[i], 1e-9);
    EXPECT_NEAR(b.gy[i], 2.5 * a.gy[i], 1e-9);
    EXPECT_NEAR(a.magnitude[i], std::hypot(a.gx[i], a.gy[i]), 1e-9);
  }
}

TEST(Gradient, DegenerateImageIsAnError) {
  EXPECT_THROW(gradient(GrayImage(1, 8)), Error);
  EXPECT_THROW(gradient(GrayImage(8, 1)), Error);
}

TEST(Rotate, ZeroAngleIsIdentity) {
  const GrayImage img = fixture::random_image(17, 9, 1);
  const Rotated r = rotate(img, 0.0, 255.0, Interp::bilinear);
  EXPECT_EQ(r.image, img);
  const Point2 p = r.transform.to_src({3.25, 7.5});
  EXPECT_DOUBLE_EQ(p.x, 3.25);
  EXPECT_DOUBLE_EQ(p.y, 7.5);
}

TEST(Rotate, QuarterTurnIsExactPermutation) {
  const GrayImage img = fixture::random_image(17, 9, 2);
  const Rotated r = rotate(img, std::numbers::pi / 2.0, 255.0, Interp::nearest);
  EXPECT_EQ(r.image.width(), 9);
  EXPECT_EQ(r.image.height(), 17);
  EXPECT_EQ(r.image, oracle::rotate_ccw90(img));
}

TEST(Rotate, AxisAlignedAnglesPermutePixels) {
  const GrayImage img = fixture::random_image(12, 7, 3);
  std::vector<double> sorted(img.pixels().begin(), img.pixels().end());
  std::sort(sorted.begin(), sorted.end());
  GrayImage expected = img;
  for (int quarter = 0; quarter < 4; ++quarter) {
    const Rotated r = rotate(img, quarter * std::numbers::pi / 2.0, -1.0, Interp::nearest);
    EXPECT_EQ(r.image, expected) << "quarter " << quarter;
    std::vector<double> got(r.image.pixels().begin(), r.image.pixels().end());
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, sorted);
    expected = oracle::rotate_ccw90(expected);
  }
}

TEST(Rotate, BoundingBoxAndRoundTrip) {
  for (double angle : {0.3, -0.7, 1.2, 2.5, 4.0}) {
    const RotationTransform t = make_rotation(64, 40, angle);
    const double c = std::abs(std::cos(angle)), s = std::abs(std::sin(angle));
    EXPECT_EQ(t.dst_width, static_cast<int>(std::ceil(64 * c + 40 * s - 1e-9)));
    EXPECT_EQ(t.dst_height, static_cast<int>(std::ceil(64 * s + 40 * c - 1e-9)));
    const Point2 center = t.to_src(t.dst_center);
    EXPECT_NEAR(center.x, 31.5, 0.5);
    EXPECT_NEAR(center.y, 19.5, 0.5);
    for (Point2 p : {Point2{0, 0}, Point2{63, 39}, Point2{10.5, 30.25}}) {
      const Point2 back = t.to_src(t.to_dst(p));
      EXPECT_NEAR(back.x, p.x, 1e-9);
      EXPECT_NEAR(back.y, p.y, 1e-9);
    }
  }
}

TEST(Rotate, DirectionBecomesHorizontal) {
  // direction a in y-down coordinates maps onto +x after rotate(a)
  const double a = 0.6;
  const RotationTransform t = make_rotation(50, 50, a);
  const Point2 p0 = t.to_dst({25, 25});
  const Point2 p1 = t.to_dst({25 + 10 * std::cos(a), 25 + 10 * std::sin(a)});
  EXPECT_NEAR(p1.x - p0.x, 10.0, 1e-9);
  EXPECT_NEAR(p1.y - p0.y, 0.0, 1e-9);
}

TEST(Rotate, FillOutsideSource) {
  const Rotated r = rotate(GrayImage(20, 20, 0.0), std::numbers::pi / 4.0, 255.0, Interp::nearest);
  EXPECT_EQ(r.image(0, 0), 255.0);
  EXPECT_EQ(r.image(r.image.width() / 2, r.image.height() / 2), 0.0);
}

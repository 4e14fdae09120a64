#include <gtest/gtest.h>

#include <random>

#include "mallnav/error.hpp"
#include "mallnav/evalmetrics.hpp"

namespace mallnav {
namespace {

BinaryMask block(int w, int h, int x0, int y0, int x1, int y1) {
  BinaryMask m(w, h);
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x) m.set(x, y, true);
  return m;
}

TEST(Overlap, Examples) {
  const BinaryMask a = block(20, 20, 0, 0, 10, 10);
  EXPECT_DOUBLE_EQ(overlap_percentage(a, a).overlap_percent, 100.0);
  EXPECT_DOUBLE_EQ(overlap_percentage(a, block(20, 20, 10, 10, 20, 20)).overlap_percent, 0.0);
  const OverlapReport r = overlap_percentage(a, block(20, 20, 0, 0, 10, 8));
  EXPECT_DOUBLE_EQ(r.overlap_percent, 80.0);
  EXPECT_EQ(r.map_store_pixels, 100);
  EXPECT_EQ(r.registered_store_pixels, 80);
  EXPECT_EQ(r.intersection_pixels, 80);
  EXPECT_DOUBLE_EQ(overlap_percentage(BinaryMask(20, 20), a).overlap_percent, 0.0);
}

TEST(Overlap, DenominatorIsTheMapMask) {
  const BinaryMask small = block(20, 20, 0, 0, 10, 8);
  const BinaryMask big = block(20, 20, 0, 0, 10, 10);
  EXPECT_DOUBLE_EQ(overlap_percentage(small, big).overlap_percent, 100.0);
  EXPECT_DOUBLE_EQ(overlap_percentage(big, small).overlap_percent, 80.0);
}

TEST(Overlap, MatchesPixelCount) {
  std::mt19937_64 rng(4);
  std::bernoulli_distribution coin(0.3);
  for (int trial = 0; trial < 20; ++trial) {
    BinaryMask a(31, 17), b(31, 17);
    std::int64_t na = 0, both = 0;
    for (int y = 0; y < 17; ++y)
      for (int x = 0; x < 31; ++x) {
        const bool pa = coin(rng), pb = coin(rng);
        a.set(x, y, pa);
        b.set(x, y, pb);
        na += pa;
        both += pa && pb;
      }
    const OverlapReport r = overlap_percentage(a, b);
    EXPECT_DOUBLE_EQ(r.overlap_percent, na ? 100.0 * double(both) / double(na) : 0.0);
    EXPECT_EQ(r.to_json().dump(), overlap_percentage(a, b).to_json().dump());
  }
}

TEST(Overlap, DimensionMismatch) {
  try {
    overlap_percentage(BinaryMask(4, 4), BinaryMask(4, 5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_argument);
  }
}

TEST(DetectionPr, Perfect) {
  const std::vector<Point2> truth{{10, 10}, {50, 50}, {90, 10}};
  const PrecisionRecall pr = detection_pr(truth, truth, 5.0);
  EXPECT_DOUBLE_EQ(pr.precision, 1.0);
  EXPECT_DOUBLE_EQ(pr.recall, 1.0);
  EXPECT_FALSE(pr.precision_by_convention);
}

TEST(DetectionPr, EmptyDetectionConvention) {
  const std::vector<Point2> truth{{10, 10}};
  const PrecisionRecall pr = detection_pr(std::span<const Point2>{}, truth, 5.0);
  EXPECT_DOUBLE_EQ(pr.precision, 1.0);
  EXPECT_TRUE(pr.precision_by_convention);
  EXPECT_EQ(pr.matched, 0u);
  EXPECT_DOUBLE_EQ(pr.recall, 0.0);
}

TEST(DetectionPr, OneSpuriousOfTwelve) {
  std::vector<Point2> truth, detected;
  for (int i = 0; i < 12; ++i) {
    truth.push_back({20.0 * i, 30.0});
    detected.push_back({20.0 * i + 1.0, 31.0});
  }
  detected.push_back({500, 500});
  const PrecisionRecall pr = detection_pr(detected, truth, 5.0);
  EXPECT_DOUBLE_EQ(pr.precision, 12.0 / 13.0);
  EXPECT_DOUBLE_EQ(pr.recall, 1.0);
}

TEST(DetectionPr, TruthMatchedOnce) {
  const std::vector<Point2> truth{{0, 0}};
  const std::vector<Point2> detected{{1, 0}, {0, 1}, {0.5, 0}};
  const PrecisionRecall pr = detection_pr(detected, truth, 5.0);
  EXPECT_EQ(pr.matched, 1u);
  EXPECT_DOUBLE_EQ(pr.precision, 1.0 / 3.0);
  EXPECT_THROW(detection_pr(detected, truth, 0.0), Error);
}

TEST(DetectionPr, StoreRegionsUseCentroids) {
  StoreRegion s;
  s.centroid = {10, 10};
  const std::vector<StoreRegion> detected{s};
  const std::vector<Point2> truth{{12, 10}};
  EXPECT_EQ(detection_pr(detected, truth, 3.0).matched, 1u);
  EXPECT_EQ(detection_pr(detected, truth, 1.0).matched, 0u);
}

}  // namespace
}  // namespace mallnav

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "mallnav/error.hpp"
#include "mallnav/raster.hpp"
#include "oracles.hpp"

namespace mallnav {
namespace {

BinaryMask from_rows(const std::vector<std::string>& rows) {
  BinaryMask m(int(rows.front().size()), int(rows.size()));
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x) m.set(x, y, rows[std::size_t(y)][std::size_t(x)] == '#');
  return m;
}

TEST(SegmentByColor, ChebyshevTolerance) {
  RasterImage img(1, 1, Rgb{250, 220, 90});
  EXPECT_TRUE(segment_by_color(img, {{255, 221, 85}, 10}).at(0, 0));
  EXPECT_FALSE(segment_by_color(img, {{255, 221, 85}, 4}).at(0, 0));
}

TEST(SegmentByColor, ZeroToleranceMatchesExactPixels) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> c(0, 3);
  RasterImage img(64, 64);
  for (int y = 0; y < 64; ++y)
    for (int x = 0; x < 64; ++x)
      img.set(x, y, {std::uint8_t(c(rng)), std::uint8_t(c(rng)), std::uint8_t(c(rng))});
  const ColorSpec spec{{1, 2, 3}, 0};
  const BinaryMask m = segment_by_color(img, spec);
  for (int y = 0; y < 64; ++y)
    for (int x = 0; x < 64; ++x) EXPECT_EQ(m.at(x, y), (img.at(x, y) == Rgb{1, 2, 3}));
  EXPECT_EQ(segment_by_color(img, spec), m);
}

TEST(ColorSpec, RejectsBadTolerance) {
  EXPECT_THROW((ColorSpec{{0, 0, 0}, -1}.validate()), Error);
  EXPECT_THROW((ColorSpec{{0, 0, 0}, 256}.validate()), Error);
}

TEST(ConnectedComponents, Basics) {
  EXPECT_TRUE(connected_components(BinaryMask(5, 5), Connectivity::four).regions.empty());
  const BinaryMask diag = from_rows({"#.", ".#"});
  EXPECT_EQ(connected_components(diag, Connectivity::four).regions.size(), 2u);
  EXPECT_EQ(connected_components(diag, Connectivity::eight).regions.size(), 1u);
}

TEST(ConnectedComponents, RegionStats) {
  const BinaryMask m = from_rows({"......", ".###..", ".###..", "....#."});
  const LabeledRegions r = connected_components(m, Connectivity::four);
  ASSERT_EQ(r.regions.size(), 2u);
  EXPECT_EQ(r.regions[0].area, 6);
  EXPECT_EQ(r.regions[0].bbox, (BBox{1, 1, 3, 2}));
  EXPECT_DOUBLE_EQ(r.regions[0].centroid.x, 2.5);
  EXPECT_DOUBLE_EQ(r.regions[0].centroid.y, 2.0);
  EXPECT_EQ(r.regions[0].boundary.size(), 6u);
  EXPECT_EQ(r.regions[1].area, 1);
  EXPECT_EQ(r.mask_of(r.regions[1].id).count(), 1);
}

TEST(ConnectedComponents, MatchesFloodFillOracle) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const BinaryMask m = oracle::random_mask(rng, 32, 32, 0.45);
    for (const bool eight : {false, true}) {
      const LabeledRegions r = connected_components(m, eight ? Connectivity::eight : Connectivity::four);
      ASSERT_EQ(r.label_map, oracle::flood_fill_labels(m, eight)) << "trial " << trial;
      std::int64_t total = 0;
      for (const Region& reg : r.regions) total += reg.area;
      EXPECT_EQ(total, m.count());
    }
  }
}

TEST(ConnectedComponents, StatsIndependentOfScanOrder) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const BinaryMask m = oracle::random_mask(rng, 24, 18, 0.5);
    BinaryMask flipped(m.width(), m.height());
    for (int y = 0; y < m.height(); ++y)
      for (int x = 0; x < m.width(); ++x) flipped.set(m.width() - 1 - x, m.height() - 1 - y, m.at(x, y));
    const auto key = [&](const LabeledRegions& r, bool unflip) {
      std::vector<std::tuple<std::int64_t, double, double, int, int, int, int>> out;
      for (const Region& g : r.regions) {
        if (unflip) {
          out.emplace_back(g.area, m.width() - g.centroid.x, m.height() - g.centroid.y, m.width() - 1 - g.bbox.x1,
                           m.height() - 1 - g.bbox.y1, m.width() - 1 - g.bbox.x0, m.height() - 1 - g.bbox.y0);
        } else {
          out.emplace_back(g.area, g.centroid.x, g.centroid.y, g.bbox.x0, g.bbox.y0, g.bbox.x1, g.bbox.y1);
        }
      }
      std::sort(out.begin(), out.end());
      return out;
    };
    const auto a = key(connected_components(m, Connectivity::eight), false);
    const auto b = key(connected_components(flipped, Connectivity::eight), true);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(std::get<0>(a[i]), std::get<0>(b[i]));
      EXPECT_NEAR(std::get<1>(a[i]), std::get<1>(b[i]), 1e-9);
      EXPECT_NEAR(std::get<2>(a[i]), std::get<2>(b[i]), 1e-9);
      EXPECT_EQ(std::get<3>(a[i]), std::get<3>(b[i]));
      EXPECT_EQ(std::get<6>(a[i]), std::get<6>(b[i]));
    }
  }
}

TEST(DistanceTransform, Examples) {
  BinaryMask single(5, 5);
  single.set(2, 2, true);
  const DistanceField d = distance_transform(single);
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 5; ++x) EXPECT_EQ(d.at(x, y), (x == 2 && y == 2) ? 1 : 0);
  EXPECT_EQ(distance_transform(BinaryMask(5, 5, true)).at(2, 2), 9);
}

TEST(DistanceTransform, MatchesBruteForce) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const double density = 0.5 + 0.49 * (trial % 10) / 9.0;
    const BinaryMask m = oracle::random_mask(rng, 64, 64, density);
    ASSERT_EQ(distance_transform(m).values, oracle::edt(m)) << "trial " << trial;
  }
}

TEST(DistanceTransform, ZeroOnBackgroundPositiveOnForeground) {
  std::mt19937_64 rng(3);
  const BinaryMask m = oracle::random_mask(rng, 40, 30, 0.7);
  const DistanceField d = distance_transform(m);
  for (int y = 0; y < 30; ++y)
    for (int x = 0; x < 40; ++x) EXPECT_EQ(d.at(x, y) == 0, !m.at(x, y));
}

RasterImage stripe_image(int stripe_width) {
  RasterImage img(30, 20, Rgb{0, 0, 0});
  for (int y = 0; y < 20; ++y)
    for (int x = 10; x < 10 + stripe_width; ++x) img.set(x, y, {255, 255, 255});
  return img;
}

TEST(RegionGrow, WideStripeKeepsInterior) {
  const RasterImage img = stripe_image(7);
  const std::vector<Pixel> seeds{{13, 10}};
  const BinaryMask g = region_grow(img, seeds, {{255, 255, 255}, 0}, 3);
  BinaryMask expect(30, 20);
  for (int y = 2; y < 18; ++y)
    for (int x = 12; x <= 14; ++x) expect.set(x, y, true);
  EXPECT_EQ(g, expect);
}

TEST(RegionGrow, NarrowStripeIsPruned) {
  const std::vector<Pixel> seeds{{11, 10}};
  EXPECT_EQ(region_grow(stripe_image(3), seeds, {{255, 255, 255}, 0}, 3).count(), 0);
}

TEST(RegionGrow, ZeroHalfwidthIsFloodFill) {
  std::mt19937_64 rng(8);
  const BinaryMask m = oracle::random_mask(rng, 32, 32, 0.6);
  RasterImage img(32, 32);
  for (int y = 0; y < 32; ++y)
    for (int x = 0; x < 32; ++x) img.set(x, y, m.at(x, y) ? Rgb{200, 200, 200} : Rgb{10, 10, 10});
  const std::vector<Pixel> seeds{{3, 3}, {20, 17}, {31, 0}};
  const BinaryMask g = region_grow(img, seeds, {{200, 200, 200}, 5}, 0);
  const auto labels = oracle::flood_fill_labels(m, false);
  std::set<std::int32_t> seeded;
  for (const Pixel& s : seeds)
    if (m.at(s.x, s.y)) seeded.insert(labels[std::size_t(s.y) * 32 + s.x]);
  for (int y = 0; y < 32; ++y)
    for (int x = 0; x < 32; ++x) EXPECT_EQ(g.at(x, y), seeded.count(labels[std::size_t(y) * 32 + x]) > 0);
  const BinaryMask color = segment_by_color(img, {{200, 200, 200}, 5});
  EXPECT_EQ(mask_minus(g, color).count(), 0);
}

TEST(RegionGrow, SeedOutOfBoundsThrows) {
  const std::vector<Pixel> seeds{{30, 0}};
  EXPECT_THROW(region_grow(stripe_image(7), seeds, {{255, 255, 255}, 0}, 0), Error);
}

TEST(ConvexHull, Examples) {
  const std::vector<Point2> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}};
  const Polygon h = convex_hull(square);
  EXPECT_EQ(h.vertices, (std::vector<Point2>{{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
  const std::vector<Point2> tri{{5, 1}, {0, 0}, {2, 4}};
  EXPECT_EQ(convex_hull(tri).vertices, (std::vector<Point2>{{0, 0}, {5, 1}, {2, 4}}));
}

TEST(ConvexHull, DegenerateInputs) {
  const std::vector<Point2> two{{0, 0}, {1, 1}};
  const std::vector<Point2> line{{0, 0}, {1, 1}, {2, 2}, {3, 3}};
  try {
    convex_hull(line);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate_input);
  }
  EXPECT_THROW(convex_hull(two), Error);
}

TEST(ConvexHull, MatchesCubicOracle) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> n_dist(3, 40);
  std::uniform_int_distribution<int> c(0, 30);
  int checked = 0;
  while (checked < 200) {
    std::vector<Point2> pts(static_cast<std::size_t>(n_dist(rng)));
    for (Point2& p : pts) p = {double(c(rng)), double(c(rng))};
    const auto expect = oracle::hull_vertices(pts);
    if (expect.size() < 3) {
      EXPECT_THROW(convex_hull(pts), Error);
      continue;
    }
    const Polygon h = convex_hull(pts);
    std::set<std::pair<double, double>> got;
    for (const Point2& v : h.vertices) got.insert({v.x, v.y});
    ASSERT_EQ(got, expect);
    ASSERT_EQ(got.size(), h.vertices.size());
    EXPECT_GT(signed_area(h), 0.0);
    EXPECT_EQ(h.vertices.front().x, expect.begin()->first);
    EXPECT_EQ(h.vertices.front().y, expect.begin()->second);
    for (const Point2& p : pts) EXPECT_TRUE(contains(h, p));
    ++checked;
  }
}

Region region_of(const BinaryMask& m) {
  const LabeledRegions r = connected_components(m, Connectivity::four);
  EXPECT_EQ(r.regions.size(), 1u);
  return r.regions.front();
}

TEST(ShapeRegularity, Rectangle) {
  BinaryMask m(20, 20);
  for (int y = 3; y < 9; ++y)
    for (int x = 2; x < 12; ++x) m.set(x, y, true);
  const Region r = region_of(m);
  const ShapeRegularity s = shape_regularity(r, region_hull(r));
  EXPECT_DOUBLE_EQ(s.solidity, 1.0);
  EXPECT_DOUBLE_EQ(s.extent, 1.0);
}

TEST(ShapeRegularity, RightTriangle) {
  const int n = 60;
  BinaryMask m(n, n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x <= y; ++x) m.set(x, y, true);
  const Region r = region_of(m);
  const ShapeRegularity s = shape_regularity(r, region_hull(r));
  // Pixel staircases stick out past the hypotenuse, so solidity sits just under 1.
  EXPECT_GT(s.solidity, 0.95);
  EXPECT_LE(s.solidity, 1.0);
  EXPECT_NEAR(s.extent, 0.5, 0.01);
}

TEST(ShapeRegularity, PlusPentomino) {
  const BinaryMask m = from_rows({".#.", "###", ".#."});
  const Region r = region_of(m);
  const ShapeRegularity s = shape_regularity(r, region_hull(r));
  EXPECT_NEAR(s.solidity, 5.0 / 7.0, 1e-12);
  EXPECT_NEAR(s.extent, 5.0 / 9.0, 1e-12);
}

TEST(Rasterize, PixelCentersInsidePolygon) {
  const Polygon sq{{{2, 2}, {6, 2}, {6, 5}, {2, 5}}};
  const BinaryMask m = rasterize(sq, 10, 10);
  for (int y = 0; y < 10; ++y)
    for (int x = 0; x < 10; ++x) EXPECT_EQ(m.at(x, y), x >= 2 && x < 6 && y >= 2 && y < 5) << x << "," << y;
}

TEST(Rasterize, AgreesWithPointInPolygon) {
  const Polygon tri{{{1.3, 0.7}, {27.9, 5.1}, {9.2, 21.4}}};
  const BinaryMask m = rasterize(tri, 32, 32);
  for (int y = 0; y < 32; ++y)
    for (int x = 0; x < 32; ++x) EXPECT_EQ(m.at(x, y), contains(tri, {x + 0.5, y + 0.5})) << x << "," << y;
}

TEST(MaskOps, SetAlgebra) {
  const BinaryMask a = from_rows({"##..", "##.."});
  const BinaryMask b = from_rows({".##.", ".##."});
  EXPECT_EQ(mask_and(a, b), from_rows({".#..", ".#.."}));
  EXPECT_EQ(mask_or(a, b), from_rows({"###.", "###."}));
  EXPECT_EQ(mask_minus(a, b), from_rows({"#...", "#..."}));
  EXPECT_THROW(mask_and(a, BinaryMask(3, 2)), Error);
}

}  // namespace
}  // namespace mallnav

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mallnav/error.hpp"
#include "mallnav/register.hpp"

namespace mallnav {
namespace {

PointSet random_points(std::mt19937_64& rng, int n, double w = 200.0, double h = 100.0) {
  std::uniform_real_distribution<double> ux(0.0, w), uy(0.0, h);
  PointSet p;
  for (int i = 0; i < n; ++i) p.points.push_back({ux(rng), uy(rng)});
  return p;
}

PointSet similarity(const PointSet& in, double deg, double s, Point2 t) {
  const double a = deg * std::numbers::pi / 180.0;
  PointSet out;
  for (const Point2& p : in.points) {
    out.points.push_back({s * (std::cos(a) * p.x - std::sin(a) * p.y) + t.x,
                          s * (std::sin(a) * p.x + std::cos(a) * p.y) + t.y});
  }
  return out;
}

void expect_monotone(const RegistrationResult& r) {
  for (std::size_t i = 1; i < r.log_likelihood_trace.size(); ++i) {
    EXPECT_GE(r.log_likelihood_trace[i], r.log_likelihood_trace[i - 1] - 1e-9) << "iteration " << i;
  }
}

void expect_column_mass(const RegistrationResult& r) {
  for (Eigen::Index n = 0; n < r.correspondence.cols(); ++n) {
    EXPECT_NEAR(r.correspondence.col(n).sum() + r.outlier_mass(n), 1.0, 1e-9);
  }
}

TEST(Cpd, IdentityRigid) {
  std::mt19937_64 rng(1);
  const PointSet x = random_points(rng, 40);
  CpdParams p;
  p.mode = CpdMode::rigid;
  const RegistrationResult r = cpd_register(x, x, p);
  const auto& t = std::get<RigidTransform>(r.transform);
  EXPECT_LT((t.rotation - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_LT(t.translation.norm(), 1e-6);
  EXPECT_NEAR(t.scale, 1.0, 1e-6);
  EXPECT_LT(r.sigma2, 1e-8);
  expect_monotone(r);
  expect_column_mass(r);
}

TEST(Cpd, RecoversSimilarity) {
  std::mt19937_64 rng(2);
  const PointSet x = random_points(rng, 50);
  const Point2 t{12.0, -7.0};
  const PointSet y = similarity(x, 30.0, 1.1, t);
  CpdParams p;
  p.mode = CpdMode::rigid;
  const RegistrationResult r = cpd_register(x, y, p);
  const auto& rt = std::get<RigidTransform>(r.transform);
  // The recovered map takes y back to x, so it is the inverse of the generator.
  const double a = -30.0 * std::numbers::pi / 180.0;
  Eigen::Matrix2d expect_r;
  expect_r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  const Eigen::Vector2d expect_t = -(expect_r * Eigen::Vector2d(t.x, t.y)) / 1.1;
  EXPECT_LT((rt.rotation - expect_r).cwiseAbs().maxCoeff(), 1e-3);
  EXPECT_NEAR(rt.scale, 1.0 / 1.1, 1e-3);
  EXPECT_LT((rt.translation - expect_t).cwiseAbs().maxCoeff(), 1e-3);
  EXPECT_NEAR(rt.rotation.determinant(), 1.0, 1e-12);
  EXPECT_LT((rt.rotation.transpose() * rt.rotation - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff(), 1e-12);
  expect_monotone(r);
}

TEST(Cpd, AffineWithClutter) {
  std::mt19937_64 rng(3);
  const int n = 60;
  const PointSet y = random_points(rng, n);
  Eigen::Matrix2d a;
  a << 1.1, 0.2, -0.15, 0.9;
  const Eigen::Vector2d t(20.0, 5.0);
  PointSet x;
  for (const Point2& q : y.points) {
    const Eigen::Vector2d v = a * Eigen::Vector2d(q.x, q.y) + t;
    x.points.push_back({v.x(), v.y()});
  }
  const PointSet exact = x;
  std::vector<bool> inlier(std::size_t(n), true);
  std::uniform_real_distribution<double> ux(-20.0, 280.0), uy(-20.0, 130.0);
  for (int i = 0; i < n * 3 / 10; ++i) {
    x.points[std::size_t(i * 3)] = {ux(rng), uy(rng)};
    inlier[std::size_t(i * 3)] = false;
  }
  CpdParams p;
  p.mode = CpdMode::affine;
  p.w = 0.3;
  const RegistrationResult r = cpd_register(x, y, p);
  double ss = 0.0;
  int count = 0;
  for (int i = 0; i < n; ++i) {
    if (!inlier[std::size_t(i)]) continue;
    const Point2 d = apply_transform(r.transform, y.points[std::size_t(i)]) - exact.points[std::size_t(i)];
    ss += dot(d, d);
    ++count;
  }
  EXPECT_LT(std::sqrt(ss / count) / r.target_frame.scale, 0.05);
  expect_monotone(r);
  expect_column_mass(r);
}

TEST(Cpd, ZeroOutlierWeightConvergesFast) {
  std::mt19937_64 rng(4);
  for (const int n : {10, 60, 200}) {
    const PointSet x = random_points(rng, n);
    CpdParams p;
    p.mode = CpdMode::rigid;
    p.w = 0.0;
    p.tol = 0.0;
    p.max_iter = 50;
    const RegistrationResult r = cpd_register(x, x, p);
    EXPECT_LT(r.sigma2, 1e-8) << "n=" << n;
    EXPECT_LE(r.iterations, 50);
  }
}

TEST(Cpd, RigidEquivariance) {
  std::mt19937_64 rng(5);
  const PointSet x = random_points(rng, 40);
  const PointSet y = similarity(x, 12.0, 0.95, {4.0, 9.0});
  CpdParams p;
  p.mode = CpdMode::rigid;
  const RegistrationResult base = cpd_register(x, y, p);
  const double g_deg = 25.0;
  const Point2 g_t{-30.0, 14.0};
  const RegistrationResult moved = cpd_register(similarity(x, g_deg, 1.0, g_t), y, p);
  const PointSet probe = random_points(rng, 10);
  for (const Point2& q : probe.points) {
    const PointSet one{{apply_transform(base.transform, q)}};
    const Point2 expect = similarity(one, g_deg, 1.0, g_t).points.front();
    const Point2 got = apply_transform(moved.transform, q);
    EXPECT_NEAR(got.x, expect.x, 1e-6);
    EXPECT_NEAR(got.y, expect.y, 1e-6);
  }
}

TEST(Cpd, NonrigidFitsSmoothWarpAndMatchesKernelForm) {
  std::mt19937_64 rng(6);
  const PointSet y = random_points(rng, 30);
  PointSet x;
  for (const Point2& q : y.points) {
    x.points.push_back({q.x + 3.0 * std::sin(q.y / 40.0), q.y + 2.0 * std::cos(q.x / 50.0)});
  }
  const RegistrationResult r = cpd_register(x, y, CpdParams{});
  expect_monotone(r);
  expect_column_mass(r);
  const auto& t = std::get<NonrigidTransform>(r.transform);
  for (std::size_t i = 0; i < y.size(); ++i) {
    const Point2 n = t.source_frame.to_normalized(y.points[i]);
    Point2 moved = n;
    for (Eigen::Index j = 0; j < t.basis.rows(); ++j) {
      const double dx = n.x - t.basis(j, 0), dy = n.y - t.basis(j, 1);
      const double k = std::exp(-(dx * dx + dy * dy) / (2.0 * t.beta * t.beta));
      moved = moved + Point2{k * t.coefficients(j, 0), k * t.coefficients(j, 1)};
    }
    const Point2 expect = t.target_frame.from_normalized(moved);
    const Point2 got = apply_transform(r.transform, y.points[i]);
    EXPECT_NEAR(got.x, expect.x, 1e-9);
    EXPECT_NEAR(got.y, expect.y, 1e-9);
    EXPECT_LT(distance(got, x.points[i]), 0.5);
  }
}

TEST(Cpd, DegenerateInputs) {
  PointSet line;
  for (int i = 0; i < 10; ++i) line.points.push_back({double(i), 2.0 * i});
  PointSet two{{{0, 0}, {1, 1}}};
  CpdParams p;
  p.mode = CpdMode::rigid;
  try {
    cpd_register(line, line, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate_input);
  }
  EXPECT_THROW(cpd_register(two, two, p), Error);
  p.w = 1.0;
  EXPECT_THROW(p.validate(), Error);
}

TEST(Transforms, Examples) {
  const Transform id = RigidTransform{};
  EXPECT_EQ(apply_transform(id, Point2{3.5, -2.0}), (Point2{3.5, -2.0}));
  RigidTransform shift;
  shift.translation = {3.0, -4.0};
  EXPECT_EQ(apply_transform(Transform{shift}, Point2{0.0, 0.0}), (Point2{3.0, -4.0}));

  const Polygon square{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
  EXPECT_EQ(warp_polygon(id, square), square);
  RigidTransform quarter;
  quarter.rotation << 0.0, -1.0, 1.0, 0.0;
  const Polygon turned = warp_polygon(Transform{quarter}, square);
  const std::vector<Point2> expect{{0, 0}, {0, 1}, {-1, 1}, {-1, 0}};
  ASSERT_EQ(turned.vertices.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(turned.vertices[i].x, expect[i].x, 1e-15);
    EXPECT_NEAR(turned.vertices[i].y, expect[i].y, 1e-15);
  }
}

TEST(Transforms, NonrigidWarpIsVertexwise) {
  std::mt19937_64 rng(7);
  const PointSet y = random_points(rng, 12);
  PointSet x = similarity(y, 3.0, 1.05, {2.0, 1.0});
  const RegistrationResult r = cpd_register(x, y, CpdParams{});
  const Polygon poly{{{10, 10}, {60, 12}, {55, 40}, {12, 35}}};
  const Polygon warped = warp_polygon(r.transform, poly);
  ASSERT_EQ(warped.vertices.size(), poly.vertices.size());
  for (std::size_t i = 0; i < poly.vertices.size(); ++i) {
    EXPECT_EQ(warped.vertices[i], apply_transform(r.transform, poly.vertices[i]));
  }
}

TEST(Transforms, JsonRoundTripIsExact) {
  std::mt19937_64 rng(8);
  const PointSet x = random_points(rng, 15);
  const PointSet y = similarity(x, 7.0, 0.9, {1.0, 2.0});
  for (const CpdMode m : {CpdMode::rigid, CpdMode::affine, CpdMode::nonrigid}) {
    CpdParams p;
    p.mode = m;
    const RegistrationResult r = cpd_register(x, y, p);
    const nlohmann::json j = transform_to_json(r.transform);
    const Transform back = transform_from_json(nlohmann::json::parse(j.dump()));
    EXPECT_EQ(mode_of(back), m);
    EXPECT_EQ(transform_to_json(back), j);
    for (const Point2& q : y.points) EXPECT_EQ(apply_transform(back, q), apply_transform(r.transform, q));
    EXPECT_EQ(registration_summary(r)["iterations"], r.iterations);
  }
}

}  // namespace
}  // namespace mallnav

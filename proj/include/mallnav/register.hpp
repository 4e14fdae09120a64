#pragma once

#include <Eigen/Dense>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "mallnav/extract.hpp"
#include "mallnav/geometry.hpp"

namespace mallnav {

enum class CpdMode { rigid, affine, nonrigid };

std::string_view to_string(CpdMode mode);
CpdMode parse_cpd_mode(std::string_view text);

struct CpdParams {
  CpdMode mode = CpdMode::nonrigid;
  /// Prior mass of the uniform outlier component.
  double w = 0.3;
  /// Gaussian kernel width for nonrigid mode, in normalized units.
  double beta = 2.0;
  double lambda = 3.0;
  int max_iter = 150;
  double tol = 1e-8;
  double sigma2_floor = 1e-10;

  void validate() const;
};

/// Zero-mean, unit-RMS frame: normalized = (p - mean) / scale.
struct NormalizationFrame {
  Point2 mean;
  double scale = 1.0;

  Point2 to_normalized(Point2 p) const { return (1.0 / scale) * (p - mean); }
  Point2 from_normalized(Point2 p) const { return scale * p + mean; }
};

struct RigidTransform {
  Eigen::Matrix2d rotation = Eigen::Matrix2d::Identity();
  double scale = 1.0;
  Eigen::Vector2d translation = Eigen::Vector2d::Zero();
};

struct AffineTransform {
  Eigen::Matrix2d matrix = Eigen::Matrix2d::Identity();
  Eigen::Vector2d translation = Eigen::Vector2d::Zero();
};

/// p -> denorm_target( n + sum_j exp(-|n - b_j|^2 / (2 beta^2)) W_j ),  n = norm_source(p)
struct NonrigidTransform {
  Eigen::MatrixX2d basis;  // normalized source points
  Eigen::MatrixX2d coefficients;
  double beta = 2.0;
  NormalizationFrame source_frame;
  NormalizationFrame target_frame;
};

using Transform = std::variant<RigidTransform, AffineTransform, NonrigidTransform>;

CpdMode mode_of(const Transform& t);

struct RegistrationResult {
  Transform transform;
  /// Final GMM variance in normalized target units.
  double sigma2 = 0.0;
  /// Posterior P(m | n): rows are source (GMM) points, columns target points.
  Eigen::MatrixXd correspondence;
  /// Outlier posterior per target point; column sums of `correspondence` plus this equal 1.
  Eigen::VectorXd outlier_mass;
  /// Objective after each E-step: log-likelihood, minus the smoothness penalty in nonrigid mode.
  std::vector<double> log_likelihood_trace;
  int iterations = 0;
  bool converged = false;
  NormalizationFrame source_frame;
  NormalizationFrame target_frame;
};

/// Coherent Point Drift: source points `source` are GMM centroids moved onto `target`.
/// Throws degenerate_input for fewer than 3 points or (rigid/affine) collinear sets.
RegistrationResult cpd_register(const PointSet& target, const PointSet& source, const CpdParams& params);

Point2 apply_transform(const Transform& t, Point2 p);
PointSet apply_transform(const Transform& t, const PointSet& pts);
Polygon warp_polygon(const Transform& t, const Polygon& poly);

/// {"mode": ..., row-major matrix fields, normalization frames}; doubles round-trip exactly.
nlohmann::json transform_to_json(const Transform& t);
Transform transform_from_json(const nlohmann::json& j);

/// Transform plus scalar diagnostics and the objective trace (no correspondence matrix).
nlohmann::json registration_summary(const RegistrationResult& r);

}  // namespace mallnav

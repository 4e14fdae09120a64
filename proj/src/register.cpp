#include "mallnav/register.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mallnav/error.hpp"
#include "mallnav/simd.hpp"

namespace mallnav {

std::string_view to_string(CpdMode mode) {
  switch (mode) {
    case CpdMode::rigid: return "rigid";
    case CpdMode::affine: return "affine";
    case CpdMode::nonrigid: return "nonrigid";
  }
  return "unknown";
}

CpdMode parse_cpd_mode(std::string_view text) {
  for (CpdMode m : {CpdMode::rigid, CpdMode::affine, CpdMode::nonrigid})
    if (text == to_string(m)) return m;
  throw Error(ErrorKind::invalid_argument, "unknown registration mode: " + std::string(text));
}

void CpdParams::validate() const {
  if (!(w >= 0.0 && w < 1.0)) throw Error(ErrorKind::invalid_argument, "outlier weight w must be in [0, 1)");
  if (!(beta > 0.0) || !(lambda > 0.0)) throw Error(ErrorKind::invalid_argument, "beta and lambda must be > 0");
  if (max_iter < 1) throw Error(ErrorKind::invalid_argument, "max_iter must be >= 1");
  if (!(tol >= 0.0)) throw Error(ErrorKind::invalid_argument, "tol must be >= 0");
  if (!(sigma2_floor > 0.0)) throw Error(ErrorKind::invalid_argument, "sigma2_floor must be > 0");
}

CpdMode mode_of(const Transform& t) {
  if (std::holds_alternative<RigidTransform>(t)) return CpdMode::rigid;
  if (std::holds_alternative<AffineTransform>(t)) return CpdMode::affine;
  return CpdMode::nonrigid;
}

namespace {

constexpr int kDim = 2;

NormalizationFrame frame_of(const PointSet& pts, const char* which) {
  Point2 mean;
  for (const Point2& p : pts.points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw Error(ErrorKind::invalid_argument, std::string("cpd_register: non-finite ") + which + " point");
    }
    mean = mean + p;
  }
  mean = (1.0 / double(pts.size())) * mean;
  double ss = 0.0;
  for (const Point2& p : pts.points) ss += dot(p - mean, p - mean);
  const double rms = std::sqrt(ss / double(pts.size()));
  if (!(rms > 1e-12)) {
    throw Error(ErrorKind::degenerate_input, std::string("cpd_register: all ") + which + " points coincide");
  }
  return {mean, rms};
}

Eigen::MatrixX2d normalized(const PointSet& pts, const NormalizationFrame& f) {
  Eigen::MatrixX2d m(Eigen::Index(pts.size()), 2);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point2 q = f.to_normalized(pts.points[i]);
    m(Eigen::Index(i), 0) = q.x;
    m(Eigen::Index(i), 1) = q.y;
  }
  return m;
}

void require_not_collinear(const Eigen::MatrixX2d& m, const char* which) {
  const Eigen::RowVector2d mean = m.colwise().mean();
  const Eigen::MatrixX2d c = m.rowwise() - mean;
  const Eigen::Matrix2d cov = (c.transpose() * c) / double(m.rows());
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(cov);
  if (eig.eigenvalues()(0) < 1e-9 * std::max(eig.eigenvalues()(1), 1e-300)) {
    throw Error(ErrorKind::degenerate_input, std::string("cpd_register: ") + which + " points are collinear");
  }
}

struct EStep {
  Eigen::MatrixXd P;        // M x N
  Eigen::VectorXd outlier;  // N
  double log_likelihood = 0.0;
};

// Posteriors and log-likelihood, computed with a per-column log-sum-exp so that a
// vanishing sigma2 (or w = 0) never divides by zero.
void expectation(const Eigen::MatrixX2d& X, const Eigen::MatrixX2d& TY, double sigma2, double w, EStep& out) {
  const Eigen::Index N = X.rows(), M = TY.rows();
  out.P.resize(M, N);
  out.outlier.resize(N);

  const auto count = static_cast<std::size_t>(M);
  std::vector<double> ty_x(count), ty_y(count), d2(count);
  for (Eigen::Index m = 0; m < M; ++m) {
    ty_x[std::size_t(m)] = TY(m, 0);
    ty_y[std::size_t(m)] = TY(m, 1);
  }

  const double log_component = std::log((1.0 - w) / (double(M) * 2.0 * std::numbers::pi * sigma2));
  const double log_outlier = w > 0.0 ? std::log(w / double(N)) : -std::numeric_limits<double>::infinity();
  const double inv_two_sigma2 = 1.0 / (2.0 * sigma2);

  double total = 0.0;
  for (Eigen::Index n = 0; n < N; ++n) {
    simd::squared_distances(X(n, 0), X(n, 1), ty_x.data(), ty_y.data(), std::size_t(M), d2.data());
    double peak = log_outlier;
    for (Eigen::Index m = 0; m < M; ++m) {
      const double a = log_component - d2[std::size_t(m)] * inv_two_sigma2;
      d2[std::size_t(m)] = a;
      peak = std::max(peak, a);
    }
    double sum = std::exp(log_outlier - peak);
    for (Eigen::Index m = 0; m < M; ++m) sum += std::exp(d2[std::size_t(m)] - peak);
    const double lse = peak + std::log(sum);
    for (Eigen::Index m = 0; m < M; ++m) out.P(m, n) = std::exp(d2[std::size_t(m)] - lse);
    out.outlier(n) = std::exp(log_outlier - lse);
    total += lse;
  }
  out.log_likelihood = total;
}

Eigen::MatrixXd gaussian_kernel(const Eigen::MatrixX2d& A, const Eigen::MatrixX2d& B, double beta) {
  Eigen::MatrixXd G(A.rows(), B.rows());
  const double inv = 1.0 / (2.0 * beta * beta);
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < B.rows(); ++j) G(i, j) = std::exp(-(A.row(i) - B.row(j)).squaredNorm() * inv);
  return G;
}

struct EmRun {
  Eigen::Matrix2d R = Eigen::Matrix2d::Identity();
  double s = 1.0;
  Eigen::Matrix2d B = Eigen::Matrix2d::Identity();
  Eigen::Vector2d t = Eigen::Vector2d::Zero();
  Eigen::MatrixX2d W;
  double sigma2 = 0.0;
  EStep e;
  RegistrationResult result;
};

// EM on normalized sets from the identity transform.
EmRun run_em(const Eigen::MatrixX2d& X, const Eigen::MatrixX2d& Y, const CpdParams& params) {
  const Eigen::Index N = X.rows(), M = Y.rows();
  const double w = params.w;

  EmRun run;
  Eigen::MatrixX2d TY = Y;
  Eigen::Matrix2d& R = run.R;
  double& s = run.s;
  Eigen::Matrix2d& B = run.B;
  Eigen::Vector2d& t = run.t;
  Eigen::MatrixX2d& W = run.W;
  double& sigma2 = run.sigma2;
  sigma2 = (double(M) * X.squaredNorm() + double(N) * Y.squaredNorm() -
            2.0 * X.colwise().sum().dot(Y.colwise().sum())) /
           double(kDim * M * N);
  sigma2 = std::max(sigma2, params.sigma2_floor);
  W = Eigen::MatrixX2d::Zero(M, 2);
  Eigen::MatrixXd G;
  if (params.mode == CpdMode::nonrigid) G = gaussian_kernel(Y, Y, params.beta);

  const auto penalty = [&] {
    return params.mode == CpdMode::nonrigid ? 0.5 * params.lambda * (W.transpose() * G * W).trace() : 0.0;
  };

  RegistrationResult& result = run.result;
  EStep& e = run.e;
  expectation(X, TY, sigma2, w, e);
  result.log_likelihood_trace.push_back(e.log_likelihood - penalty());

  for (int iter = 1; iter <= params.max_iter; ++iter) {
    const Eigen::VectorXd P1 = e.P.rowwise().sum();
    const Eigen::VectorXd Pt1 = e.P.colwise().sum().transpose();
    const double Np = P1.sum();
    if (!(Np > 1e-12)) break;  // every target point explained by the outlier component
    const Eigen::MatrixX2d PX = e.P * X;

    const Eigen::Vector2d mu_x = X.transpose() * Pt1 / Np;
    const Eigen::Vector2d mu_y = Y.transpose() * P1 / Np;
    const double xpx = (X.array().square().rowwise().sum().matrix().dot(Pt1)) - Np * mu_x.squaredNorm();

    bool hit_floor = false;
    const auto set_sigma2 = [&](double value) {
      if (!(value > params.sigma2_floor)) {
        value = params.sigma2_floor;
        hit_floor = true;
      }
      sigma2 = value;
    };

    switch (params.mode) {
      case CpdMode::rigid: {
        const Eigen::Matrix2d A = PX.transpose() * Y - Np * mu_x * mu_y.transpose();
        const Eigen::JacobiSVD<Eigen::Matrix2d> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
        Eigen::Matrix2d C = Eigen::Matrix2d::Identity();
        C(1, 1) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
        R = svd.matrixU() * C * svd.matrixV().transpose();
        const double ypy = (Y.array().square().rowwise().sum().matrix().dot(P1)) - Np * mu_y.squaredNorm();
        const double trAR = (A.transpose() * R).trace();
        s = trAR / ypy;
        t = mu_x - s * R * mu_y;
        set_sigma2((xpx - s * trAR) / (Np * kDim));
        TY = (s * Y * R.transpose()).rowwise() + t.transpose();
        break;
      }
      case CpdMode::affine: {
        const Eigen::Matrix2d A = PX.transpose() * Y - Np * mu_x * mu_y.transpose();
        const Eigen::Matrix2d YPY = Y.transpose() * P1.asDiagonal() * Y - Np * mu_y * mu_y.transpose();
        B = A * YPY.inverse();
        t = mu_x - B * mu_y;
        set_sigma2((xpx - (A * B.transpose()).trace()) / (Np * kDim));
        TY = (Y * B.transpose()).rowwise() + t.transpose();
        break;
      }
      case CpdMode::nonrigid: {
        Eigen::MatrixXd lhs = P1.asDiagonal() * G;
        lhs.diagonal().array() += params.lambda * sigma2;
        const Eigen::MatrixX2d rhs = PX - P1.asDiagonal() * Y;
        W = lhs.partialPivLu().solve(rhs);
        TY = Y + G * W;
        const double cross_term = (PX.array() * TY.array()).sum();
        const double tpt = TY.array().square().rowwise().sum().matrix().dot(P1);
        const double xpx_raw = X.array().square().rowwise().sum().matrix().dot(Pt1);
        set_sigma2((xpx_raw - 2.0 * cross_term + tpt) / (Np * kDim));
        break;
      }
    }

    const double previous = result.log_likelihood_trace.back();
    expectation(X, TY, sigma2, w, e);
    result.log_likelihood_trace.push_back(e.log_likelihood - penalty());
    result.iterations = iter;
    if (std::abs(result.log_likelihood_trace.back() - previous) < params.tol || hit_floor) {
      result.converged = true;
      break;
    }
  }

  return run;
}

}  // namespace

RegistrationResult cpd_register(const PointSet& target, const PointSet& source, const CpdParams& params) {
  params.validate();
  if (target.size() < 3 || source.size() < 3) {
    throw Error(ErrorKind::degenerate_input, "cpd_register: need at least 3 target and 3 source points");
  }
  const NormalizationFrame fx = frame_of(target, "target");
  const NormalizationFrame fy = frame_of(source, "source");
  const Eigen::MatrixX2d X = normalized(target, fx);
  const Eigen::MatrixX2d Y = normalized(source, fy);
  if (params.mode != CpdMode::nonrigid) {
    require_not_collinear(X, "target");
    require_not_collinear(Y, "source");
  }

  EmRun run = run_em(X, Y, params);
  RegistrationResult result = std::move(run.result);
  const Eigen::Matrix2d& R = run.R;
  const double s = run.s;
  const Eigen::Matrix2d& B = run.B;
  const Eigen::Vector2d& t = run.t;
  const Eigen::MatrixX2d& W = run.W;
  const double sigma2 = run.sigma2;
  EStep& e = run.e;

  result.sigma2 = sigma2;
  result.correspondence = std::move(e.P);
  result.outlier_mass = std::move(e.outlier);
  result.source_frame = fy;
  result.target_frame = fx;

  const double ratio = fx.scale / fy.scale;
  const Eigen::Vector2d mx(fx.mean.x, fx.mean.y), my(fy.mean.x, fy.mean.y);
  switch (params.mode) {
    case CpdMode::rigid: {
      RigidTransform r;
      r.rotation = R;
      r.scale = s * ratio;
      r.translation = mx + fx.scale * t - r.scale * R * my;
      result.transform = r;
      break;
    }
    case CpdMode::affine: {
      AffineTransform a;
      a.matrix = ratio * B;
      a.translation = mx + fx.scale * t - a.matrix * my;
      result.transform = a;
      break;
    }
    case CpdMode::nonrigid: {
      NonrigidTransform n;
      n.basis = Y;
      n.coefficients = W;
      n.beta = params.beta;
      n.source_frame = fy;
      n.target_frame = fx;
      result.transform = std::move(n);
      break;
    }
  }
  return result;
}

Point2 apply_transform(const Transform& t, Point2 p) {
  if (const auto* r = std::get_if<RigidTransform>(&t)) {
    const Eigen::Vector2d q = r->scale * r->rotation * Eigen::Vector2d(p.x, p.y) + r->translation;
    return {q.x(), q.y()};
  }
  if (const auto* a = std::get_if<AffineTransform>(&t)) {
    const Eigen::Vector2d q = a->matrix * Eigen::Vector2d(p.x, p.y) + a->translation;
    return {q.x(), q.y()};
  }
  const auto& n = std::get<NonrigidTransform>(t);
  const Point2 q = n.source_frame.to_normalized(p);
  const double inv = 1.0 / (2.0 * n.beta * n.beta);
  Point2 moved = q;
  for (Eigen::Index j = 0; j < n.basis.rows(); ++j) {
    const double dx = q.x - n.basis(j, 0), dy = q.y - n.basis(j, 1);
    const double g = std::exp(-(dx * dx + dy * dy) * inv);
    moved.x += g * n.coefficients(j, 0);
    moved.y += g * n.coefficients(j, 1);
  }
  return n.target_frame.from_normalized(moved);
}

PointSet apply_transform(const Transform& t, const PointSet& pts) {
  PointSet out;
  out.points.reserve(pts.size());
  for (const Point2& p : pts.points) out.points.push_back(apply_transform(t, p));
  return out;
}

Polygon warp_polygon(const Transform& t, const Polygon& poly) {
  Polygon out;
  out.vertices.reserve(poly.vertices.size());
  for (const Point2& p : poly.vertices) out.vertices.push_back(apply_transform(t, p));
  return out;
}

}  // namespace mallnav

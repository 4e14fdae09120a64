#include "mallnav/error.hpp"
#include "mallnav/register.hpp"

namespace mallnav {

using nlohmann::json;

namespace {

json matrix_json(const Eigen::Matrix2d& m) { return json::array({m(0, 0), m(0, 1), m(1, 0), m(1, 1)}); }

Eigen::Matrix2d matrix_from(const json& j) {
  if (!j.is_array() || j.size() != 4) throw Error(ErrorKind::parse, "expected a row-major 2x2 matrix");
  Eigen::Matrix2d m;
  m << j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>();
  return m;
}

json vector_json(const Eigen::Vector2d& v) { return json::array({v.x(), v.y()}); }

Eigen::Vector2d vector_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorKind::parse, "expected a 2-vector");
  return {j[0].get<double>(), j[1].get<double>()};
}

json rows_json(const Eigen::MatrixX2d& m) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) arr.push_back({m(i, 0), m(i, 1)});
  return arr;
}

Eigen::MatrixX2d rows_from(const json& j) {
  if (!j.is_array()) throw Error(ErrorKind::parse, "expected an array of rows");
  Eigen::MatrixX2d m(static_cast<Eigen::Index>(j.size()), 2);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Eigen::Vector2d r = vector_from(j[i]);
    m(Eigen::Index(i), 0) = r.x();
    m(Eigen::Index(i), 1) = r.y();
  }
  return m;
}

json frame_json(const NormalizationFrame& f) { return {{"mean", {f.mean.x, f.mean.y}}, {"scale", f.scale}}; }

NormalizationFrame frame_from(const json& j) {
  const Eigen::Vector2d mean = vector_from(j.at("mean"));
  return {{mean.x(), mean.y()}, j.at("scale").get<double>()};
}

}  // namespace

json transform_to_json(const Transform& t) {
  json j;
  j["mode"] = to_string(mode_of(t));
  if (const auto* r = std::get_if<RigidTransform>(&t)) {
    j["rotation"] = matrix_json(r->rotation);
    j["scale"] = r->scale;
    j["translation"] = vector_json(r->translation);
  } else if (const auto* a = std::get_if<AffineTransform>(&t)) {
    j["matrix"] = matrix_json(a->matrix);
    j["translation"] = vector_json(a->translation);
  } else {
    const auto& n = std::get<NonrigidTransform>(t);
    j["basis"] = rows_json(n.basis);
    j["coefficients"] = rows_json(n.coefficients);
    j["beta"] = n.beta;
    j["source_frame"] = frame_json(n.source_frame);
    j["target_frame"] = frame_json(n.target_frame);
  }
  return j;
}

Transform transform_from_json(const json& j) {
  try {
    switch (parse_cpd_mode(j.at("mode").get<std::string>())) {
      case CpdMode::rigid:
        return RigidTransform{matrix_from(j.at("rotation")), j.at("scale").get<double>(),
                              vector_from(j.at("translation"))};
      case CpdMode::affine:
        return AffineTransform{matrix_from(j.at("matrix")), vector_from(j.at("translation"))};
      case CpdMode::nonrigid: {
        NonrigidTransform n;
        n.basis = rows_from(j.at("basis"));
        n.coefficients = rows_from(j.at("coefficients"));
        if (n.basis.rows() != n.coefficients.rows()) {
          throw Error(ErrorKind::parse, "nonrigid basis and coefficient counts differ");
        }
        n.beta = j.at("beta").get<double>();
        n.source_frame = frame_from(j.at("source_frame"));
        n.target_frame = frame_from(j.at("target_frame"));
        return n;
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, std::string("transform: ") + e.what());
  } catch (const Error& e) {
    throw Error(ErrorKind::parse, std::string("transform: ") + e.what());
  }
  throw Error(ErrorKind::parse, "transform: unknown mode");
}

json registration_summary(const RegistrationResult& r) {
  return {{"transform", transform_to_json(r.transform)},
          {"sigma2", r.sigma2},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"log_likelihood_trace", r.log_likelihood_trace},
          {"outlier_mass_total", r.outlier_mass.sum()}};
}

}  // namespace mallnav

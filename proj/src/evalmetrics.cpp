#include "mallnav/evalmetrics.hpp"

#include <algorithm>
#include <cstdio>
#include <tuple>
#include <vector>

#include "mallnav/error.hpp"
#include "mallnav/simd.hpp"

namespace mallnav {

using nlohmann::json;

json OverlapReport::to_json() const {
  return {{"overlap_percent", overlap_percent},
          {"map_store_pixels", map_store_pixels},
          {"registered_store_pixels", registered_store_pixels},
          {"intersection_pixels", intersection_pixels}};
}

std::string OverlapReport::summary() const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "overlap %.2f%% (%lld of %lld map store pixels; %lld registered)", overlap_percent,
                static_cast<long long>(intersection_pixels), static_cast<long long>(map_store_pixels),
                static_cast<long long>(registered_store_pixels));
  return buf;
}

OverlapReport overlap_percentage(const BinaryMask& map_stores, const BinaryMask& registered_stores) {
  if (map_stores.width() != registered_stores.width() || map_stores.height() != registered_stores.height()) {
    throw Error(ErrorKind::invalid_argument, "overlap_percentage: mask dimensions differ");
  }
  OverlapReport r;
  r.map_store_pixels = map_stores.count();
  r.registered_store_pixels = registered_stores.count();
  r.intersection_pixels = simd::and_count(map_stores.bytes().data(), registered_stores.bytes().data(),
                                          map_stores.bytes().size());
  r.overlap_percent = r.map_store_pixels > 0 ? 100.0 * double(r.intersection_pixels) / double(r.map_store_pixels) : 0.0;
  return r;
}

json PrecisionRecall::to_json() const {
  return {{"precision", precision}, {"recall", recall},   {"matched", matched},
          {"detected", detected},   {"truth", truth},     {"precision_by_convention", precision_by_convention}};
}

std::string PrecisionRecall::summary() const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "precision %.4f, recall %.4f (%zu matched, %zu detected, %zu truth)%s", precision,
                recall, matched, detected, truth, precision_by_convention ? " [no detections]" : "");
  return buf;
}

PrecisionRecall detection_pr(std::span<const Point2> detected, std::span<const Point2> truth, double match_dist) {
  if (!(match_dist > 0.0)) throw Error(ErrorKind::invalid_argument, "match_dist must be > 0");
  std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < detected.size(); ++i)
    for (std::size_t j = 0; j < truth.size(); ++j) {
      const double d = distance(detected[i], truth[j]);
      if (d <= match_dist) pairs.emplace_back(d, i, j);
    }
  std::sort(pairs.begin(), pairs.end());
  std::vector<char> used_d(detected.size(), 0), used_t(truth.size(), 0);
  PrecisionRecall pr;
  pr.detected = detected.size();
  pr.truth = truth.size();
  for (const auto& [d, i, j] : pairs) {
    if (used_d[i] || used_t[j]) continue;
    used_d[i] = used_t[j] = 1;
    ++pr.matched;
  }
  if (pr.detected == 0) {
    pr.precision = 1.0;
    pr.precision_by_convention = true;
  } else {
    pr.precision = double(pr.matched) / double(pr.detected);
  }
  pr.recall = pr.truth == 0 ? 1.0 : double(pr.matched) / double(pr.truth);
  return pr;
}

PrecisionRecall detection_pr(std::span<const StoreRegion> detected, std::span<const Point2> truth, double match_dist) {
  std::vector<Point2> centroids;
  for (const StoreRegion& s : detected) centroids.push_back(s.centroid);
  return detection_pr(centroids, truth, match_dist);
}

}  // namespace mallnav

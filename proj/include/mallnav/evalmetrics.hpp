#pragma once

#include <span>
#include <string>

#include "json.hpp"
#include "mallnav/extract.hpp"
#include "mallnav/raster.hpp"

namespace mallnav {

/// overlap_percent = 100 * intersection / map_store_pixels. Not symmetric in its arguments.
struct OverlapReport {
  double overlap_percent = 0.0;
  std::int64_t map_store_pixels = 0;
  std::int64_t registered_store_pixels = 0;
  std::int64_t intersection_pixels = 0;

  nlohmann::json to_json() const;
  std::string summary() const;
};

/// Throws invalid_argument on a dimension mismatch. An empty map mask yields 0%.
OverlapReport overlap_percentage(const BinaryMask& map_stores, const BinaryMask& registered_stores);

struct PrecisionRecall {
  double precision = 1.0;
  double recall = 1.0;
  std::size_t matched = 0;
  std::size_t detected = 0;
  std::size_t truth = 0;
  /// Set when nothing was detected and precision is 1.0 by convention.
  bool precision_by_convention = false;

  nlohmann::json to_json() const;
  std::string summary() const;
};

/// Greedy matching: globally closest (detection, truth) pairs first, each used once.
PrecisionRecall detection_pr(std::span<const Point2> detected, std::span<const Point2> truth, double match_dist);
PrecisionRecall detection_pr(std::span<const StoreRegion> detected, std::span<const Point2> truth,
                             double match_dist);

}  // namespace mallnav

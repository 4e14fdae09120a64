#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mallnav/raster.hpp"

namespace mallnav {

struct ExtractConfig {
  ColorSpec major_road_color{{255, 221, 85}, 24};
  ColorSpec freeway_color{{250, 165, 90}, 24};
  ColorSpec minor_road_color{{255, 255, 255}, 8};
  ColorSpec label_color{{0, 0, 0}, 60};
  ColorSpec walkway_color{{235, 235, 235}, 6};
  /// Tolerance used when flood-filling a store's sampled background color.
  int store_color_tolerance = 12;
  int min_road_halfwidth = 3;
  std::int64_t min_store_area = 40;
  double solidity_min = 0.85;
  double extent_min = 0.60;
  std::int64_t min_label_area = 4;
  std::int64_t max_label_area = 2000;

  void validate() const;
};

enum class StoreSource { map, directory };

struct StoreRegion {
  int id = 0;
  Polygon footprint;
  Point2 centroid;
  std::int64_t area = 0;
  StoreSource source = StoreSource::map;
  std::optional<std::string> name;
};

struct FeatureMasks {
  BinaryMask roads;
  BinaryMask parking;
  BinaryMask walkways;
  LabeledRegions labels;
};

/// Control points: one row per store, in store-id order.
struct PointSet {
  std::vector<Point2> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

LabeledRegions detect_text_labels(const RasterImage& img, const ExtractConfig& cfg);

/// Pixels used as growth seeds for one label: its centroid pixel and a thin ring just
/// outside its bounding box (the centroid of a glyph cluster is usually on ink).
std::vector<Pixel> label_seed_pixels(const Region& label, int width, int height);

BinaryMask detect_roads(const RasterImage& img, const ExtractConfig& cfg, const LabeledRegions& labels);

std::vector<StoreRegion> detect_parking_lots(const RasterImage& img, const ExtractConfig& cfg,
                                             const BinaryMask& roads, const LabeledRegions& labels);

/// Walkway-colored pixels minus any pixel already claimed by `exclude` (roads, parking).
BinaryMask detect_walkways(const RasterImage& img, const ExtractConfig& cfg,
                           std::span<const BinaryMask> exclude = {});

std::vector<StoreRegion> detect_stores_map(const RasterImage& img, const ExtractConfig& cfg,
                                           const LabeledRegions& labels);

std::vector<StoreRegion> detect_stores_directory(const RasterImage& img, std::span<const ColorSpec> seed_colors,
                                                 const ExtractConfig& cfg);

PointSet control_points(std::span<const StoreRegion> stores);

/// Convex footprints of the connected components of a mask (components below `min_area` skipped).
std::vector<Polygon> mask_polygons(const BinaryMask& mask, std::int64_t min_area);

/// Splits each component into pieces whose hulls have solidity >= `min_solidity`, by
/// recursively halving the bounding box along its longer side. The union of the piece
/// hulls approximates non-convex areas (L and T shapes) without covering their notches.
std::vector<Polygon> convex_pieces(const BinaryMask& mask, std::int64_t min_area, double min_solidity = 0.9);

/// Union of the rasterized footprints.
BinaryMask footprint_mask(std::span<const StoreRegion> stores, int width, int height);

}  // namespace mallnav

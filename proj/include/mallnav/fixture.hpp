#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "mallnav/layers.hpp"
#include "mallnav/raster.hpp"

namespace mallnav {

struct FixtureParams {
  std::uint64_t seed = 1;
  int n_stores = 12;
  /// Uniform per-channel pixel noise amplitude applied to both images.
  int noise = 2;
  /// Amplitude in directory pixels of the smooth sinusoidal jitter.
  double jitter = 2.0;
  double max_rotation_deg = 8.0;
  double scale_min = 1.1;
  double scale_max = 1.3;
  /// Directory-only kiosks with no counterpart on the map.
  int clutter = 2;

  void validate() const;
};

/// Map pixel -> directory pixel: similarity about the map center plus smooth jitter.
struct DirectoryWarp {
  double scale = 1.0;
  double rotation_deg = 0.0;
  Point2 center;
  Point2 offset;
  double jitter = 0.0;
  double wavelength_x = 300.0;
  double wavelength_y = 300.0;
  double phase_x = 0.0;
  double phase_y = 0.0;

  Point2 apply(Point2 map_point) const;
};

struct TruthStore {
  int map_id = 0;
  int directory_id = 0;
  std::string name;
  /// Store interior in map pixels, inclusive.
  BBox bbox;
  Point2 centroid;
};

struct TruthParking {
  BBox bbox;
  Point2 centroid;
};

struct Fixture {
  FixtureParams params;
  RasterImage map;
  RasterImage directory;
  BinaryMask roads;
  std::vector<TruthStore> stores;
  std::vector<TruthParking> parking;
  /// Kiosk names by directory id.
  std::vector<std::pair<int, std::string>> clutter;
  DirectoryWarp warp;
  ColorSpec directory_store_color;
  GeoAnchor anchor;
  nlohmann::json sidecar;

  nlohmann::json truth_json() const;
  /// Pipeline configuration with paths relative to the fixture directory.
  nlohmann::json config_json() const;
};

Fixture generate_fixture(const FixtureParams& params);

/// Writes map.png, directory.png, roads.png, sidecar.json, truth.json and config.json.
void write_fixture(const Fixture& fx, const std::string& dir);

}  // namespace mallnav

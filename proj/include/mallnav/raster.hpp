#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mallnav/geometry.hpp"

namespace mallnav {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// 8-bit RGB image, row-major, channels interleaved.
class RasterImage {
 public:
  RasterImage() = default;
  RasterImage(int width, int height, Rgb fill = {});
  RasterImage(int width, int height, std::vector<std::uint8_t> interleaved);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return width_ == 0 || height_ == 0; }
  bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

  Rgb at(int x, int y) const {
    const std::uint8_t* p = &data_[3 * (std::size_t(y) * width_ + x)];
    return {p[0], p[1], p[2]};
  }
  void set(int x, int y, Rgb c) {
    std::uint8_t* p = &data_[3 * (std::size_t(y) * width_ + x)];
    p[0] = c.r;
    p[1] = c.g;
    p[2] = c.b;
  }

  std::span<const std::uint8_t> bytes() const { return data_; }

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Reference color with a Chebyshev (max per-channel) tolerance.
struct ColorSpec {
  Rgb reference;
  int tolerance = 0;

  bool matches(Rgb c) const;
  void validate() const;

  friend bool operator==(const ColorSpec&, const ColorSpec&) = default;
};

class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height, bool fill = false);

  int width() const { return width_; }
  int height() const { return height_; }
  bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

  bool at(int x, int y) const { return bits_[std::size_t(y) * width_ + x] != 0; }
  void set(int x, int y, bool v) { bits_[std::size_t(y) * width_ + x] = v ? 1 : 0; }

  /// One byte per pixel, 0 or 1.
  std::span<const std::uint8_t> bytes() const { return bits_; }
  std::span<std::uint8_t> bytes() { return bits_; }

  std::int64_t count() const;

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

BinaryMask mask_and(const BinaryMask& a, const BinaryMask& b);
BinaryMask mask_or(const BinaryMask& a, const BinaryMask& b);
/// a \ b
BinaryMask mask_minus(const BinaryMask& a, const BinaryMask& b);

struct Region {
  int id = 0;
  std::int64_t area = 0;
  Point2 centroid;
  BBox bbox;
  /// Region pixels with at least one 4-neighbor outside the region (or off-image), raster order.
  std::vector<Pixel> boundary;
};

struct LabeledRegions {
  int width = 0;
  int height = 0;
  /// 0 is background; otherwise an index into `regions` plus one.
  std::vector<std::int32_t> label_map;
  std::vector<Region> regions;

  std::int32_t label_at(int x, int y) const { return label_map[std::size_t(y) * width + x]; }
  /// All pixels of region `id`, raster order.
  std::vector<Pixel> pixels_of(int id) const;
  BinaryMask mask_of(int id) const;
};

/// Squared Euclidean distance to the nearest background pixel.
struct DistanceField {
  int width = 0;
  int height = 0;
  std::vector<std::int64_t> values;

  std::int64_t at(int x, int y) const { return values[std::size_t(y) * width + x]; }
};

enum class Connectivity { four = 4, eight = 8 };

BinaryMask segment_by_color(const RasterImage& img, const ColorSpec& spec);

/// Region ids follow the raster order of each region's first pixel.
LabeledRegions connected_components(const BinaryMask& mask, Connectivity connectivity);

/// Exact squared EDT; pixels outside the image count as background.
DistanceField distance_transform(const BinaryMask& mask);

/// Seeded 4-connected growth over `grow_spec` pixels whose distance value is at least
/// min_halfwidth^2. Seeds that land on a non-matching or pruned pixel contribute nothing.
BinaryMask region_grow(const RasterImage& img, std::span<const Pixel> seeds, const ColorSpec& grow_spec,
                       int min_halfwidth);

/// Convex hull with positive signed area, lexicographically smallest vertex first,
/// no collinear vertices. Throws degenerate_input for fewer than three non-collinear points.
Polygon convex_hull(std::span<const Point2> points);

struct ShapeRegularity {
  double solidity = 0.0;
  double extent = 0.0;
};

/// Solidity against the hull polygon area, extent against the pixel bbox area.
/// Throws degenerate_input on a zero-area hull.
ShapeRegularity shape_regularity(const Region& region, const Polygon& hull);

/// Hull of the pixel squares of a region. Pixel (x, y) covers [x, x+1) x [y, y+1), so a
/// W x H block has hull area W*H and the hull is never degenerate.
Polygon region_hull(const Region& region);

/// Pixels whose centers fall inside the polygon (boundary inclusive).
BinaryMask rasterize(const Polygon& poly, int width, int height);
void rasterize_into(const Polygon& poly, BinaryMask& mask);

}  // namespace mallnav

#pragma once

#include <array>
#include <chrono>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mallnav/extract.hpp"
#include "mallnav/geometry.hpp"

namespace mallnav {

struct GeoPoint {
  double lon = 0.0;
  double lat = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// Affine map from base-map pixels to (longitude, latitude) degrees:
///   lon = m[0][0] x + m[0][1] y + m[0][2],  lat = m[1][0] x + m[1][1] y + m[1][2]
class GeoAnchor {
 public:
  using Matrix = std::array<std::array<double, 3>, 2>;

  /// Throws invalid_argument when the linear part is singular (|det| <= 1e-15).
  explicit GeoAnchor(const Matrix& m);
  GeoAnchor() : GeoAnchor(Matrix{{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}}}) {}

  /// North-up anchor: pixel (0,0) at `origin`, `deg_per_px` east per +x and south per +y.
  static GeoAnchor north_up(GeoPoint origin, double deg_per_px);

  const Matrix& matrix() const { return m_; }

  GeoPoint pixel_to_geo(Point2 p) const;
  Point2 geo_to_pixel(GeoPoint g) const;

  /// Ground scale from a local equirectangular approximation at the anchor origin.
  double pixels_per_foot() const;

  friend bool operator==(const GeoAnchor& a, const GeoAnchor& b) { return a.m_ == b.m_; }

 private:
  Matrix m_;
  std::array<std::array<double, 2>, 2> inverse_;
};

struct Store {
  int id = 0;
  std::string name;
  Polygon footprint;
  Point2 centroid;
  std::optional<Point2> entrance;

  friend bool operator==(const Store&, const Store&) = default;
};

enum class AnnotationKind { parking, walkway, bus_stop, street, crossing };
enum class SafetyClass { safe, caution, unsafe };

std::string_view to_string(AnnotationKind k);
std::string_view to_string(SafetyClass s);
AnnotationKind parse_annotation_kind(std::string_view text);
SafetyClass parse_safety_class(std::string_view text);

/// Geometry arity depends on kind: bus_stop is one point, crossing is a two-point
/// segment, the rest are polygons.
struct Annotation {
  AnnotationKind kind = AnnotationKind::walkway;
  std::vector<Point2> geometry;
  std::optional<std::string> name;
  SafetyClass safety = SafetyClass::safe;

  Polygon polygon() const { return Polygon{geometry}; }
  /// Representative point: the point itself, the segment midpoint, or the polygon centroid.
  Point2 anchor_point() const;
  void validate() const;

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

using Timestamp = std::chrono::sys_seconds;

std::string format_rfc3339(Timestamp t);
Timestamp parse_rfc3339(std::string_view text);

struct UserTag {
  Point2 position;
  std::string text;
  std::string author;
  Timestamp created_at{};

  friend bool operator==(const UserTag&, const UserTag&) = default;
};

struct BaseLayer {
  std::string image_path;
  int width = 0;
  int height = 0;
  GeoAnchor anchor;

  friend bool operator==(const BaseLayer&, const BaseLayer&) = default;
};

struct Provenance {
  /// Registration summary and configuration snapshot, stored verbatim.
  nlohmann::json registration = nlohmann::json::object();
  nlohmann::json config = nlohmann::json::object();
  int dropped_stores = 0;
  double pixels_per_foot = 1.0;
  /// Store footprints detected directly on the base map, kept for overlap evaluation.
  std::vector<Polygon> map_store_footprints;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// The four-tier map. Immutable by convention: mutating operations return a new value.
struct FusedMap {
  BaseLayer base;
  std::vector<Store> directory;
  std::vector<Annotation> annotations;
  std::vector<UserTag> tags;
  Provenance provenance;

  bool in_bounds(Point2 p) const {
    return p.x >= 0.0 && p.y >= 0.0 && p.x <= double(base.width) && p.y <= double(base.height);
  }
  const Store* find_store(int id) const;
  const Store* find_store(std::string_view name) const;

  friend bool operator==(const FusedMap&, const FusedMap&) = default;
};

/// Store names and map metadata authored alongside the directory image.
struct NameSidecar {
  std::vector<std::pair<int, std::string>> stores;
  std::vector<Annotation> annotations;  // bus stops, streets, crossings in base pixels
};

/// Throws parse on malformed content, invalid_argument on duplicate store ids.
NameSidecar parse_sidecar(const nlohmann::json& doc);
NameSidecar load_sidecar(const std::string& path);

FusedMap build_fused_map(BaseLayer base, std::span<const StoreRegion> stores_map,
                         std::span<const StoreRegion> stores_dir_warped, const NameSidecar& names,
                         std::vector<Annotation> annotations, Provenance provenance = {});

/// Throws out_of_bounds if the tag lies outside the base map.
FusedMap add_user_tag(const FusedMap& map, UserTag tag);

nlohmann::json base_to_json(const BaseLayer& base);
nlohmann::json directory_to_json(std::span<const Store> stores);
nlohmann::json annotations_to_json(std::span<const Annotation> annotations);
nlohmann::json tags_to_json(std::span<const UserTag> tags);
nlohmann::json provenance_to_json(const Provenance& p);

nlohmann::json fused_map_to_json(const FusedMap& map);
/// Throws parse naming the tier and index of the first offending entry.
FusedMap fused_map_from_json(const nlohmann::json& doc);

/// Canonical text: sorted keys, two-space indent, trailing newline.
std::string serialize_fused_map(const FusedMap& map);
FusedMap deserialize_fused_map(std::string_view text);

void save_fused_map(const FusedMap& map, const std::string& path);
FusedMap load_fused_map(const std::string& path);

nlohmann::json polygon_to_json(const Polygon& poly);
Polygon polygon_from_json(const nlohmann::json& j);

}  // namespace mallnav

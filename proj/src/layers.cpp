#include "mallnav/layers.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "mallnav/error.hpp"

namespace mallnav {

using nlohmann::json;

// ---------------------------------------------------------------------------
// GeoAnchor

GeoAnchor::GeoAnchor(const Matrix& m) : m_(m) {
  const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  if (!(std::abs(det) > 1e-15) || !std::isfinite(det)) {
    throw Error(ErrorKind::invalid_argument, "geo anchor linear part is not invertible");
  }
  inverse_ = {{{m[1][1] / det, -m[0][1] / det}, {-m[1][0] / det, m[0][0] / det}}};
}

GeoAnchor GeoAnchor::north_up(GeoPoint origin, double deg_per_px) {
  return GeoAnchor(Matrix{{{deg_per_px, 0.0, origin.lon}, {0.0, -deg_per_px, origin.lat}}});
}

GeoPoint GeoAnchor::pixel_to_geo(Point2 p) const {
  return {m_[0][0] * p.x + m_[0][1] * p.y + m_[0][2], m_[1][0] * p.x + m_[1][1] * p.y + m_[1][2]};
}

Point2 GeoAnchor::geo_to_pixel(GeoPoint g) const {
  const double u = g.lon - m_[0][2];
  const double v = g.lat - m_[1][2];
  return {inverse_[0][0] * u + inverse_[0][1] * v, inverse_[1][0] * u + inverse_[1][1] * v};
}

double GeoAnchor::pixels_per_foot() const {
  constexpr double kMetersPerDegree = 111320.0;
  constexpr double kFeetPerMeter = 1.0 / 0.3048;
  const double lat_rad = m_[1][2] * std::numbers::pi / 180.0;
  // Jacobian of pixel -> local (east, north) feet.
  const double ex = m_[0][0] * kMetersPerDegree * std::cos(lat_rad) * kFeetPerMeter;
  const double ey = m_[0][1] * kMetersPerDegree * std::cos(lat_rad) * kFeetPerMeter;
  const double nx = m_[1][0] * kMetersPerDegree * kFeetPerMeter;
  const double ny = m_[1][1] * kMetersPerDegree * kFeetPerMeter;
  const double feet2_per_px2 = std::abs(ex * ny - ey * nx);
  return 1.0 / std::sqrt(feet2_per_px2);
}

// ---------------------------------------------------------------------------
// Enumerations and timestamps

std::string_view to_string(AnnotationKind k) {
  switch (k) {
    case AnnotationKind::parking: return "parking";
    case AnnotationKind::walkway: return "walkway";
    case AnnotationKind::bus_stop: return "bus_stop";
    case AnnotationKind::street: return "street";
    case AnnotationKind::crossing: return "crossing";
  }
  return "unknown";
}

std::string_view to_string(SafetyClass s) {
  switch (s) {
    case SafetyClass::safe: return "safe";
    case SafetyClass::caution: return "caution";
    case SafetyClass::unsafe: return "unsafe";
  }
  return "unknown";
}

AnnotationKind parse_annotation_kind(std::string_view text) {
  for (auto k : {AnnotationKind::parking, AnnotationKind::walkway, AnnotationKind::bus_stop, AnnotationKind::street,
                 AnnotationKind::crossing})
    if (text == to_string(k)) return k;
  throw Error(ErrorKind::parse, "unknown annotation kind '" + std::string(text) + "'");
}

SafetyClass parse_safety_class(std::string_view text) {
  for (auto s : {SafetyClass::safe, SafetyClass::caution, SafetyClass::unsafe})
    if (text == to_string(s)) return s;
  throw Error(ErrorKind::parse, "unknown safety class '" + std::string(text) + "'");
}

std::string format_rfc3339(Timestamp t) {
  const auto day = std::chrono::floor<std::chrono::days>(t);
  const std::chrono::year_month_day ymd(day);
  const std::chrono::hh_mm_ss hms(t - day);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02lldZ", int(ymd.year()), unsigned(ymd.month()),
                unsigned(ymd.day()), long(hms.hours().count()), long(hms.minutes().count()),
                static_cast<long long>(hms.seconds().count()));
  return buf;
}

Timestamp parse_rfc3339(std::string_view text) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  char tail[8] = {0};
  const std::string str(text);
  if (std::sscanf(str.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%7s", &y, &mo, &d, &h, &mi, &s, tail) != 7 ||
      (std::string_view(tail) != "Z" && std::string_view(tail) != "+00:00")) {
    throw Error(ErrorKind::parse, "not an RFC 3339 UTC timestamp: '" + str + "'");
  }
  const std::chrono::year_month_day ymd{std::chrono::year(y), std::chrono::month(unsigned(mo)),
                                        std::chrono::day(unsigned(d))};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 60) {
    throw Error(ErrorKind::parse, "invalid calendar timestamp: '" + str + "'");
  }
  return std::chrono::sys_days(ymd) + std::chrono::hours(h) + std::chrono::minutes(mi) + std::chrono::seconds(s);
}

// ---------------------------------------------------------------------------
// Annotations and lookups

Point2 Annotation::anchor_point() const {
  if (geometry.empty()) return {};
  if (geometry.size() == 1) return geometry.front();
  if (geometry.size() == 2) return 0.5 * (geometry[0] + geometry[1]);
  return polygon_centroid(polygon());
}

void Annotation::validate() const {
  const std::size_t n = geometry.size();
  switch (kind) {
    case AnnotationKind::bus_stop:
      if (n != 1) throw Error(ErrorKind::invalid_argument, "bus_stop geometry must be a single point");
      break;
    case AnnotationKind::crossing:
      if (n != 2) throw Error(ErrorKind::invalid_argument, "crossing geometry must be a two-point segment");
      break;
    default:
      if (n < 3) {
        throw Error(ErrorKind::invalid_argument,
                    std::string(to_string(kind)) + " geometry must be a polygon of at least 3 vertices");
      }
  }
}

const Store* FusedMap::find_store(int id) const {
  for (const Store& s : directory)
    if (s.id == id) return &s;
  return nullptr;
}

const Store* FusedMap::find_store(std::string_view name) const {
  for (const Store& s : directory)
    if (s.name == name) return &s;
  return nullptr;
}

// ---------------------------------------------------------------------------
// JSON helpers

json polygon_to_json(const Polygon& poly) {
  json arr = json::array();
  for (const Point2& p : poly.vertices) arr.push_back({p.x, p.y});
  return arr;
}

namespace {

Point2 point_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorKind::parse, "expected [x, y] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json point_to_json(Point2 p) { return json::array({p.x, p.y}); }

std::vector<Point2> points_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorKind::parse, "expected an array of [x, y] pairs");
  std::vector<Point2> pts;
  for (const json& p : j) pts.push_back(point_from_json(p));
  return pts;
}

const json& field(const json& j, const char* key) {
  if (!j.is_object()) throw Error(ErrorKind::parse, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw Error(ErrorKind::parse, std::string("missing key '") + key + "'");
  return *it;
}

template <class T>
T get_as(const json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::parse, std::string("key '") + key + "' has the wrong type");
  }
}

// Runs `fn`, prefixing any parse error with the tier and index it came from.
template <class Fn>
auto in_context(const std::string& where, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(ErrorKind::parse, where + ": " + e.what());
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, where + ": " + e.what());
  }
}

json annotation_to_json(const Annotation& a) {
  json j;
  j["kind"] = to_string(a.kind);
  json g = json::array();
  for (const Point2& p : a.geometry) g.push_back(point_to_json(p));
  j["geometry"] = std::move(g);
  j["name"] = a.name ? json(*a.name) : json(nullptr);
  j["safety_class"] = to_string(a.safety);
  return j;
}

Annotation annotation_from_json(const json& j) {
  Annotation a;
  a.kind = parse_annotation_kind(get_as<std::string>(j, "kind"));
  a.geometry = points_from_json(field(j, "geometry"));
  if (const auto it = j.find("name"); it != j.end() && !it->is_null()) a.name = it->get<std::string>();
  if (const auto it = j.find("safety_class"); it != j.end()) a.safety = parse_safety_class(it->get<std::string>());
  a.validate();
  return a;
}

}  // namespace

Polygon polygon_from_json(const json& j) { return Polygon{points_from_json(j)}; }

json base_to_json(const BaseLayer& base) {
  json anchor = json::array();
  for (const auto& row : base.anchor.matrix()) anchor.push_back(json::array({row[0], row[1], row[2]}));
  return {{"image", base.image_path}, {"width", base.width}, {"height", base.height}, {"anchor", anchor}};
}

json directory_to_json(std::span<const Store> stores) {
  json arr = json::array();
  for (const Store& s : stores) {
    arr.push_back({{"id", s.id},
                   {"name", s.name},
                   {"footprint", polygon_to_json(s.footprint)},
                   {"centroid", point_to_json(s.centroid)},
                   {"entrance", s.entrance ? point_to_json(*s.entrance) : json(nullptr)}});
  }
  return arr;
}

json annotations_to_json(std::span<const Annotation> annotations) {
  json arr = json::array();
  for (const Annotation& a : annotations) arr.push_back(annotation_to_json(a));
  return arr;
}

json tags_to_json(std::span<const UserTag> tags) {
  json arr = json::array();
  for (const UserTag& t : tags) {
    arr.push_back({{"position", point_to_json(t.position)},
                   {"text", t.text},
                   {"author", t.author},
                   {"created_at", format_rfc3339(t.created_at)}});
  }
  return arr;
}

json provenance_to_json(const Provenance& p) {
  json footprints = json::array();
  for (const Polygon& poly : p.map_store_footprints) footprints.push_back(polygon_to_json(poly));
  return {{"registration", p.registration},
          {"config", p.config},
          {"dropped", p.dropped_stores},
          {"pixels_per_foot", p.pixels_per_foot},
          {"map_store_footprints", footprints}};
}

json fused_map_to_json(const FusedMap& map) {
  return {{"format_version", 1},
          {"base", base_to_json(map.base)},
          {"directory", directory_to_json(map.directory)},
          {"annotations", annotations_to_json(map.annotations)},
          {"tags", tags_to_json(map.tags)},
          {"provenance", provenance_to_json(map.provenance)}};
}

FusedMap fused_map_from_json(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::parse, "fused map: top level must be an object");
  const int version = in_context("format_version", [&] { return get_as<int>(doc, "format_version"); });
  if (version != 1) throw Error(ErrorKind::parse, "unsupported format_version " + std::to_string(version));

  FusedMap map;
  in_context("base", [&] {
    const json& b = field(doc, "base");
    map.base.image_path = get_as<std::string>(b, "image");
    map.base.width = get_as<int>(b, "width");
    map.base.height = get_as<int>(b, "height");
    const json& a = field(b, "anchor");
    if (!a.is_array() || a.size() != 2 || a[0].size() != 3 || a[1].size() != 3) {
      throw Error(ErrorKind::parse, "anchor must be a 2x3 array");
    }
    GeoAnchor::Matrix m{};
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t c = 0; c < 3; ++c) m[r][c] = a[r][c].get<double>();
    try {
      map.base.anchor = GeoAnchor(m);
    } catch (const Error& e) {
      throw Error(ErrorKind::parse, e.what());
    }
  });

  const auto tier = [&](const char* name) -> const json& {
    const json& t = in_context(name, [&]() -> const json& { return field(doc, name); });
    if (!t.is_array()) throw Error(ErrorKind::parse, std::string(name) + ": expected an array");
    return t;
  };

  const json& dir = tier("directory");
  std::set<int> ids;
  for (std::size_t i = 0; i < dir.size(); ++i) {
    map.directory.push_back(in_context("directory[" + std::to_string(i) + "]", [&] {
      const json& j = dir[i];
      Store s;
      s.id = get_as<int>(j, "id");
      s.name = get_as<std::string>(j, "name");
      s.footprint = polygon_from_json(field(j, "footprint"));
      s.centroid = point_from_json(field(j, "centroid"));
      if (const auto it = j.find("entrance"); it != j.end() && !it->is_null()) s.entrance = point_from_json(*it);
      if (!ids.insert(s.id).second) throw Error(ErrorKind::parse, "duplicate store id " + std::to_string(s.id));
      return s;
    }));
  }

  const json& ann = tier("annotations");
  for (std::size_t i = 0; i < ann.size(); ++i) {
    map.annotations.push_back(
        in_context("annotations[" + std::to_string(i) + "]", [&] { return annotation_from_json(ann[i]); }));
  }

  const json& tags = tier("tags");
  for (std::size_t i = 0; i < tags.size(); ++i) {
    map.tags.push_back(in_context("tags[" + std::to_string(i) + "]", [&] {
      const json& j = tags[i];
      UserTag t;
      t.position = point_from_json(field(j, "position"));
      t.text = get_as<std::string>(j, "text");
      t.author = get_as<std::string>(j, "author");
      t.created_at = parse_rfc3339(get_as<std::string>(j, "created_at"));
      return t;
    }));
  }

  in_context("provenance", [&] {
    const json& p = field(doc, "provenance");
    map.provenance.registration = field(p, "registration");
    map.provenance.config = field(p, "config");
    map.provenance.dropped_stores = get_as<int>(p, "dropped");
    map.provenance.pixels_per_foot = get_as<double>(p, "pixels_per_foot");
    const json& fps = field(p, "map_store_footprints");
    if (!fps.is_array()) throw Error(ErrorKind::parse, "map_store_footprints must be an array");
    for (const json& f : fps) map.provenance.map_store_footprints.push_back(polygon_from_json(f));
  });
  return map;
}

std::string serialize_fused_map(const FusedMap& map) { return fused_map_to_json(map).dump(2) + "\n"; }

FusedMap deserialize_fused_map(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::parse, std::string("fused map: malformed JSON: ") + e.what());
  }
  return fused_map_from_json(doc);
}

void save_fused_map(const FusedMap& map, const std::string& path) {
  const std::string text = serialize_fused_map(map);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorKind::io, "write failed: " + path);
}

FusedMap load_fused_map(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return deserialize_fused_map(ss.str());
}

// ---------------------------------------------------------------------------
// Sidecar and construction

NameSidecar parse_sidecar(const json& doc) {
  NameSidecar out;
  if (!doc.is_object()) throw Error(ErrorKind::parse, "sidecar: top level must be an object");
  std::set<int> seen;
  if (const auto it = doc.find("stores"); it != doc.end()) {
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& j = (*it)[i];
      const auto entry = in_context("sidecar stores[" + std::to_string(i) + "]", [&] {
        return std::pair<int, std::string>(get_as<int>(j, "id"), get_as<std::string>(j, "name"));
      });
      if (!seen.insert(entry.first).second) {
        throw Error(ErrorKind::invalid_argument, "sidecar: duplicate store id " + std::to_string(entry.first));
      }
      out.stores.push_back(entry);
    }
  }
  if (const auto it = doc.find("annotations"); it != doc.end()) {
    for (std::size_t i = 0; i < it->size(); ++i) {
      out.annotations.push_back(in_context("sidecar annotations[" + std::to_string(i) + "]",
                                           [&] { return annotation_from_json((*it)[i]); }));
    }
  }
  return out;
}

NameSidecar load_sidecar(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::parse, path + ": malformed JSON: " + e.what());
  }
  return parse_sidecar(doc);
}

FusedMap build_fused_map(BaseLayer base, std::span<const StoreRegion> stores_map,
                         std::span<const StoreRegion> stores_dir_warped, const NameSidecar& names,
                         std::vector<Annotation> annotations, Provenance provenance) {
  std::set<int> seen;
  for (const auto& [id, name] : names.stores) {
    if (!seen.insert(id).second) {
      throw Error(ErrorKind::invalid_argument, "sidecar: duplicate store id " + std::to_string(id));
    }
  }

  FusedMap map;
  map.base = std::move(base);
  map.provenance = std::move(provenance);
  map.provenance.dropped_stores = 0;
  map.provenance.map_store_footprints.clear();
  for (const StoreRegion& s : stores_map) map.provenance.map_store_footprints.push_back(s.footprint);

  std::set<int> store_ids;
  for (const StoreRegion& r : stores_dir_warped) {
    if (!map.in_bounds(r.centroid)) {
      ++map.provenance.dropped_stores;
      continue;
    }
    if (!store_ids.insert(r.id).second) {
      throw Error(ErrorKind::invalid_argument, "duplicate directory store id " + std::to_string(r.id));
    }
    Store s;
    s.id = r.id;
    s.footprint = r.footprint;
    s.centroid = r.centroid;
    s.name = r.name.value_or("Store " + std::to_string(r.id));
    for (const auto& [id, name] : names.stores)
      if (id == r.id) s.name = name;
    map.directory.push_back(std::move(s));
  }

  annotations.insert(annotations.end(), names.annotations.begin(), names.annotations.end());
  for (std::size_t i = 0; i < annotations.size(); ++i) {
    annotations[i].validate();
    if (!map.in_bounds(annotations[i].anchor_point())) {
      throw Error(ErrorKind::out_of_bounds, "annotations[" + std::to_string(i) + "] lies outside the base map");
    }
  }
  map.annotations = std::move(annotations);
  return map;
}

FusedMap add_user_tag(const FusedMap& map, UserTag tag) {
  if (!map.in_bounds(tag.position)) {
    throw Error(ErrorKind::out_of_bounds, "user tag position outside the base map");
  }
  FusedMap out = map;
  out.tags.push_back(std::move(tag));
  return out;
}

}  // namespace mallnav

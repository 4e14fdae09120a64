#include "mallnav/fixture.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "mallnav/error.hpp"
#include "mallnav/image_io.hpp"

namespace mallnav {

using nlohmann::json;

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 480;

constexpr Rgb kBackground{245, 241, 228};
constexpr Rgb kWhite{255, 255, 255};
constexpr Rgb kYellow{255, 221, 85};
constexpr Rgb kOrange{250, 165, 90};
constexpr Rgb kWalkway{235, 235, 235};
constexpr Rgb kStoreFill{236, 226, 209};
constexpr Rgb kStoreBorder{160, 160, 160};
constexpr Rgb kInk{20, 20, 20};

constexpr Rgb kDirBackground{250, 250, 248};
constexpr Rgb kDirWalkway{226, 230, 236};
constexpr Rgb kDirStore{222, 196, 150};

const char* const kStoreNames[] = {
    "Saguaro Books",   "Mesa Coffee",     "Copper Shoes",   "Sonoran Outfitters", "Desert Bloom",
    "Adobe Home",      "Canyon Toys",     "Ocotillo Pharmacy", "Palo Verde Deli", "Red Rock Sports",
    "Mirage Optical",  "Cactus Music",    "Sunset Salon",   "Quail Bakery",       "Javelina Games",
    "Agave Kitchen",   "Monsoon Tea",     "Turquoise Gifts", "Dune Electronics",  "Yucca Pets",
};

// Portable draws from the standardized engine; the std distributions are not
// specified bit-for-bit across standard libraries.
struct Rng {
  std::mt19937_64 engine;

  explicit Rng(std::uint64_t seed) : engine(seed) {}
  double uniform(double lo, double hi) { return lo + (hi - lo) * double(engine() >> 11) * 0x1.0p-53; }
  int integer(int lo, int hi) { return lo + int(engine() % std::uint64_t(hi - lo + 1)); }
};

struct Rect {
  int x0, y0, x1, y1;  // inclusive

  Polygon polygon() const {
    return Polygon{{{double(x0), double(y0)}, {double(x1 + 1), double(y0)}, {double(x1 + 1), double(y1 + 1)},
                    {double(x0), double(y1 + 1)}}};
  }
  Point2 center() const { return {(x0 + x1 + 1) / 2.0, (y0 + y1 + 1) / 2.0}; }
  BBox bbox() const { return {x0, y0, x1, y1}; }
};

void fill_rect(RasterImage& img, const Rect& r, Rgb c) {
  for (int y = std::max(0, r.y0); y <= std::min(img.height() - 1, r.y1); ++y)
    for (int x = std::max(0, r.x0); x <= std::min(img.width() - 1, r.x1); ++x) img.set(x, y, c);
}

void fill_rect(BinaryMask& m, const Rect& r) {
  for (int y = std::max(0, r.y0); y <= std::min(m.height() - 1, r.y1); ++y)
    for (int x = std::max(0, r.x0); x <= std::min(m.width() - 1, r.x1); ++x) m.set(x, y, true);
}

void fill_polygon(RasterImage& img, const Polygon& poly, Rgb c) {
  const BinaryMask m = rasterize(poly, img.width(), img.height());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      if (m.at(x, y)) img.set(x, y, c);
}

// A word-like ink blob: 3x5 glyphs joined by a baseline so the word is one component.
void draw_word(RasterImage& img, Point2 center, Rng& rng) {
  const int glyphs = rng.integer(3, 5);
  const int w = 4 * glyphs - 1, h = 5;
  const int x0 = int(std::floor(center.x - w / 2.0)), y0 = int(std::floor(center.y - h / 2.0));
  for (int g = 0; g < glyphs; ++g) {
    for (int dy = 0; dy < h; ++dy) {
      for (int dx = 0; dx < 3; ++dx) {
        const bool ink = dy == h - 1 || dx == 0 || rng.integer(0, 2) == 0;
        if (ink && img.in_bounds(x0 + 4 * g + dx, y0 + dy)) img.set(x0 + 4 * g + dx, y0 + dy, kInk);
      }
    }
    if (g + 1 < glyphs && img.in_bounds(x0 + 4 * g + 3, y0 + h - 1)) img.set(x0 + 4 * g + 3, y0 + h - 1, kInk);
  }
}

void add_noise(RasterImage& img, int amplitude, Rng& rng) {
  if (amplitude <= 0) return;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      Rgb c = img.at(x, y);
      for (std::uint8_t* ch : {&c.r, &c.g, &c.b}) {
        *ch = std::uint8_t(std::clamp(int(*ch) + rng.integer(-amplitude, amplitude), 0, 255));
      }
      img.set(x, y, c);
    }
  }
}

// Rectangle outline sampled densely so the warp bends edges, not just corners.
Polygon warp_rect(const DirectoryWarp& warp, const Rect& r) {
  const Polygon src = r.polygon();
  Polygon out;
  for (std::size_t i = 0; i < src.vertices.size(); ++i) {
    const Point2 a = src.vertices[i], b = src.vertices[(i + 1) % src.vertices.size()];
    const int steps = std::max(1, int(std::ceil(distance(a, b) / 2.0)));
    for (int k = 0; k < steps; ++k) out.vertices.push_back(warp.apply(a + (double(k) / steps) * (b - a)));
  }
  return out;
}

json point_json(Point2 p) { return json::array({p.x, p.y}); }

json annotation_json(const Annotation& a) {
  json g = json::array();
  for (const Point2& p : a.geometry) g.push_back(point_json(p));
  return {{"kind", to_string(a.kind)},
          {"geometry", g},
          {"name", a.name ? json(*a.name) : json(nullptr)},
          {"safety_class", to_string(a.safety)}};
}

}  // namespace

void FixtureParams::validate() const {
  if (n_stores < 2 || n_stores > 16) throw Error(ErrorKind::invalid_argument, "fixture n_stores must be in [2, 16]");
  if (noise < 0 || noise > 4) throw Error(ErrorKind::invalid_argument, "fixture noise must be in [0, 4]");
  if (clutter < 0 || clutter > 3) throw Error(ErrorKind::invalid_argument, "fixture clutter must be in [0, 3]");
  if (!(jitter >= 0.0 && jitter <= 4.0)) throw Error(ErrorKind::invalid_argument, "fixture jitter must be in [0, 4]");
  if (!(max_rotation_deg >= 0.0 && max_rotation_deg <= 30.0)) {
    throw Error(ErrorKind::invalid_argument, "fixture rotation must be in [0, 30] degrees");
  }
  if (!(scale_min > 0.5 && scale_max >= scale_min && scale_max <= 2.0)) {
    throw Error(ErrorKind::invalid_argument, "fixture scale range must lie in (0.5, 2]");
  }
}

Point2 DirectoryWarp::apply(Point2 p) const {
  const double t = rotation_deg * std::numbers::pi / 180.0;
  const Point2 q = p - center;
  const Point2 r{scale * (std::cos(t) * q.x - std::sin(t) * q.y), scale * (std::sin(t) * q.x + std::cos(t) * q.y)};
  const Point2 j{jitter * std::sin(2.0 * std::numbers::pi * p.y / wavelength_y + phase_x),
                 jitter * std::sin(2.0 * std::numbers::pi * p.x / wavelength_x + phase_y)};
  return r + j + offset;
}

Fixture generate_fixture(const FixtureParams& params) {
  params.validate();
  Rng rng(params.seed * 0x9E3779B97F4A7C15ULL + 0x5EED);
  Rng noise_rng(params.seed ^ 0xA5A5A5A5DEADBEEFULL);

  Fixture fx;
  fx.params = params;
  fx.anchor = GeoAnchor::north_up({-111.95, 33.30}, 2.5e-6);
  fx.directory_store_color = {kDirStore, 10};

  // --- Layout in map pixels.
  const Rect top_road{0, 16, 605, 33}, center_road{0, 114, 605, 131}, bottom_road{0, 340, 605, 357};
  const Rect freeway{0, 420, 639, 437}, major_road{606, 0, 623, 479};

  const int row_counts[2] = {(params.n_stores + 1) / 2, params.n_stores / 2};
  std::vector<Rect> interiors;
  std::vector<Rect> outers;
  int row_end[2] = {20, 20};
  Rect strip{0, 148, 0, 195};
  for (int row = 0; row < 2; ++row) {
    const int r = row_counts[row];
    const int max_w = std::min(72, (570 - 4 * (r - 1) - 12) / r);
    int x = 20;
    for (int i = 0; i < r; ++i) {
      const int w = rng.integer(std::max(40, max_w - 16), max_w);
      const int depth = rng.integer(34, 40) + 4;
      const Rect outer = row == 0 ? Rect{x, 97 - depth + 1, x + w - 1, 97} : Rect{x, 148, x + w - 1, 148 + depth - 1};
      outers.push_back(outer);
      interiors.push_back({outer.x0 + 2, outer.y0 + 2, outer.x1 - 2, outer.y1 - 2});
      x += w;
      if (i == std::max(r / 2, 1) - 1) {
        if (row == 1) strip = {x, 148, x + 15, 195};
        x += 16;
      } else {
        x += 4;
      }
    }
    row_end[row] = x - 4;
  }
  const Rect w1{20, 98, row_end[0], 113}, w2{20, 132, row_end[1], 147}, w3{20, 196, 470, 211};

  std::vector<Rect> lots;
  lots.push_back({40, 212, 40 + rng.integer(100, 130) - 1, 212 + rng.integer(80, 100) - 1});
  lots.push_back({200, 212, 200 + rng.integer(100, 130) - 1, 212 + rng.integer(80, 100) - 1});

  std::vector<Rect> kiosks;
  for (int i = 0; i < params.clutter; ++i) {
    const int x0 = 380 + 70 * i, y0 = 230 + rng.integer(0, 30);
    kiosks.push_back({x0, y0, x0 + rng.integer(24, 30) - 1, y0 + rng.integer(20, 24) - 1});
  }

  // --- Map image.
  RasterImage map(kWidth, kHeight, kBackground);
  fx.roads = BinaryMask(kWidth, kHeight);
  for (const Rect& r : {top_road, center_road, bottom_road}) {
    fill_rect(map, r, kWhite);
    fill_rect(fx.roads, r);
  }
  fill_rect(map, freeway, kOrange);
  fill_rect(fx.roads, freeway);
  fill_rect(map, major_road, kYellow);
  fill_rect(fx.roads, major_road);
  for (const Rect& r : {w1, w2, w3, strip}) fill_rect(map, r, kWalkway);
  for (const Rect& r : lots) fill_rect(map, r, kWhite);
  for (std::size_t i = 0; i < outers.size(); ++i) {
    fill_rect(map, outers[i], kStoreBorder);
    fill_rect(map, interiors[i], kStoreFill);
  }
  for (const Rect& r : interiors) {
    draw_word(map, r.center() + Point2{double(rng.integer(-3, 3)), double(rng.integer(-2, 2))}, rng);
  }
  for (const Rect& road : {top_road, center_road, bottom_road}) {
    const int a = rng.integer(60, 280), b = rng.integer(340, 540);
    for (int cx : {a, b}) draw_word(map, {double(cx), road.center().y}, rng);
  }

  // --- Directory warp and image.
  fx.warp.scale = rng.uniform(params.scale_min, params.scale_max);
  fx.warp.rotation_deg = rng.uniform(-params.max_rotation_deg, params.max_rotation_deg);
  fx.warp.center = {310.0, 125.0};
  fx.warp.jitter = params.jitter;
  fx.warp.wavelength_x = rng.uniform(260.0, 360.0);
  fx.warp.wavelength_y = rng.uniform(260.0, 360.0);
  fx.warp.phase_x = rng.uniform(0.0, 2.0 * std::numbers::pi);
  fx.warp.phase_y = rng.uniform(0.0, 2.0 * std::numbers::pi);

  std::vector<Rect> dir_rects = interiors;
  dir_rects.insert(dir_rects.end(), kiosks.begin(), kiosks.end());
  const std::vector<Rect> dir_walks = {w1, w2, w3, strip};
  double min_x = 1e300, min_y = 1e300, max_x = -1e300, max_y = -1e300;
  for (const std::vector<Rect>* group : {static_cast<const std::vector<Rect>*>(&dir_rects), &dir_walks}) {
    for (const Rect& r : *group) {
      for (const Point2& p : warp_rect(fx.warp, r).vertices) {
        min_x = std::min(min_x, p.x);
        min_y = std::min(min_y, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
      }
    }
  }
  fx.warp.offset = {24.0 - std::floor(min_x), 48.0 - std::floor(min_y)};
  const int dir_w = int(std::ceil(max_x - min_x)) + 48, dir_h = int(std::ceil(max_y - min_y)) + 72;

  RasterImage dir(dir_w, dir_h, kDirBackground);
  for (const Rect& r : dir_walks) fill_polygon(dir, warp_rect(fx.warp, r), kDirWalkway);
  std::vector<Polygon> dir_polys;
  for (const Rect& r : dir_rects) {
    dir_polys.push_back(warp_rect(fx.warp, r));
    fill_polygon(dir, dir_polys.back(), kDirStore);
  }
  for (const Polygon& p : dir_polys) draw_word(dir, polygon_centroid(p), rng);
  draw_word(dir, {40.0, 20.0}, rng);  // directory title

  // Directory ids follow the first raster pixel of each rendered store.
  std::vector<std::pair<std::pair<int, int>, std::size_t>> first_pixel;
  for (std::size_t i = 0; i < dir_polys.size(); ++i) {
    const BinaryMask m = rasterize(dir_polys[i], dir_w, dir_h);
    std::pair<int, int> first{dir_h, dir_w};
    for (int y = 0; y < dir_h && first.first == dir_h; ++y)
      for (int x = 0; x < dir_w; ++x)
        if (m.at(x, y)) {
          first = {y, x};
          break;
        }
    first_pixel.push_back({first, i});
  }
  std::sort(first_pixel.begin(), first_pixel.end());
  std::vector<int> dir_id(dir_polys.size());
  for (std::size_t k = 0; k < first_pixel.size(); ++k) dir_id[first_pixel[k].second] = int(k) + 1;

  // Map ids follow the first raster pixel of each store interior.
  std::vector<std::size_t> map_order(interiors.size());
  for (std::size_t i = 0; i < map_order.size(); ++i) map_order[i] = i;
  std::sort(map_order.begin(), map_order.end(), [&](std::size_t a, std::size_t b) {
    return std::pair(interiors[a].y0, interiors[a].x0) < std::pair(interiors[b].y0, interiors[b].x0);
  });

  std::vector<std::string> names(std::begin(kStoreNames), std::end(kStoreNames));
  for (std::size_t i = names.size(); i > 1; --i) std::swap(names[i - 1], names[std::size_t(rng.integer(0, int(i) - 1))]);

  fx.stores.resize(interiors.size());
  for (std::size_t k = 0; k < map_order.size(); ++k) {
    const std::size_t i = map_order[k];
    TruthStore& t = fx.stores[k];
    t.map_id = int(k) + 1;
    t.directory_id = dir_id[i];
    t.name = names[i];
    t.bbox = interiors[i].bbox();
    t.centroid = interiors[i].center();
  }
  for (std::size_t i = 0; i < kiosks.size(); ++i) {
    fx.clutter.push_back({dir_id[interiors.size() + i], "Kiosk " + std::to_string(i + 1)});
  }
  for (const Rect& r : lots) fx.parking.push_back({r.bbox(), r.center()});

  add_noise(map, params.noise, noise_rng);
  add_noise(dir, params.noise, noise_rng);
  fx.map = std::move(map);
  fx.directory = std::move(dir);

  // --- Sidecar: names by directory id, streets, crossings, bus stops.
  json stores = json::array();
  std::vector<std::pair<int, std::string>> by_dir;
  for (const TruthStore& t : fx.stores) by_dir.push_back({t.directory_id, t.name});
  by_dir.insert(by_dir.end(), fx.clutter.begin(), fx.clutter.end());
  std::sort(by_dir.begin(), by_dir.end());
  for (const auto& [id, name] : by_dir) stores.push_back({{"id", id}, {"name", name}});

  std::vector<Annotation> ann;
  const auto street = [](const Rect& r, std::string name, SafetyClass s) {
    return Annotation{AnnotationKind::street, r.polygon().vertices, std::move(name), s};
  };
  ann.push_back(street(top_road, "Camelback Road", SafetyClass::safe));
  ann.push_back(street(center_road, "Market Lane", SafetyClass::caution));
  ann.push_back(street(bottom_road, "Desert Boulevard", SafetyClass::unsafe));
  ann.push_back(street(major_road, "Scottsdale Road", SafetyClass::unsafe));
  ann.push_back(street(freeway, "Loop 101", SafetyClass::unsafe));
  const int r1 = row_counts[0];
  const double cx1 = outers[1].center().x, cx2 = outers[std::size_t(r1 - 2)].center().x;
  ann.push_back({AnnotationKind::crossing, {{cx1, 112.0}, {cx1, 133.0}}, "Market Lane crosswalk", SafetyClass::safe});
  ann.push_back({AnnotationKind::crossing, {{cx2, 112.0}, {cx2, 133.0}}, std::nullopt, SafetyClass::unsafe});
  ann.push_back({AnnotationKind::bus_stop, {{30.5, 105.5}}, "Route 72 stop", SafetyClass::safe});
  ann.push_back({AnnotationKind::bus_stop, {{300.5, 203.5}}, "Route 41 stop", SafetyClass::safe});
  json annotations = json::array();
  for (const Annotation& a : ann) annotations.push_back(annotation_json(a));
  fx.sidecar = {{"stores", stores}, {"annotations", annotations}};
  return fx;
}

json Fixture::truth_json() const {
  json stores_j = json::array();
  for (const TruthStore& t : stores) {
    stores_j.push_back({{"id", t.map_id},
                        {"directory_id", t.directory_id},
                        {"name", t.name},
                        {"centroid", point_json(t.centroid)},
                        {"bbox", {t.bbox.x0, t.bbox.y0, t.bbox.x1, t.bbox.y1}}});
  }
  json parking_j = json::array();
  for (const TruthParking& p : parking) {
    parking_j.push_back({{"centroid", point_json(p.centroid)}, {"bbox", {p.bbox.x0, p.bbox.y0, p.bbox.x1, p.bbox.y1}}});
  }
  json clutter_j = json::array();
  for (const auto& [id, name] : clutter) clutter_j.push_back({{"directory_id", id}, {"name", name}});
  return {{"seed", params.seed},
          {"stores", stores_j},
          {"parking", parking_j},
          {"clutter", clutter_j},
          {"roads_mask", "roads.png"},
          {"warp",
           {{"scale", warp.scale},
            {"rotation_deg", warp.rotation_deg},
            {"center", point_json(warp.center)},
            {"offset", point_json(warp.offset)},
            {"jitter", warp.jitter}}}};
}

json Fixture::config_json() const {
  json anchor_j = json::array();
  for (const auto& row : anchor.matrix()) anchor_j.push_back({row[0], row[1], row[2]});
  const Rgb c = directory_store_color.reference;
  return {{"map_image", "map.png"},
          {"directory_image", "directory.png"},
          {"sidecar", "sidecar.json"},
          {"output_dir", "out"},
          {"anchor", anchor_j},
          {"seed_colors", {{{"reference", {c.r, c.g, c.b}}, {"tolerance", directory_store_color.tolerance}}}},
          {"grid_step", 4}};
}

void write_fixture(const Fixture& fx, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create directory " + dir + ": " + ec.message());
  const std::filesystem::path base(dir);
  write_png((base / "map.png").string(), fx.map);
  write_png((base / "directory.png").string(), fx.directory);
  write_mask_png((base / "roads.png").string(), fx.roads);
  for (const auto& [name, doc] : {std::pair<const char*, json>{"sidecar.json", fx.sidecar},
                                  {"truth.json", fx.truth_json()},
                                  {"config.json", fx.config_json()}}) {
    std::ofstream out(base / name, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "cannot write " + (base / name).string());
    out << doc.dump(2) << "\n";
  }
}

}  // namespace mallnav

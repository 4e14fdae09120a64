#include "mallnav/extract.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "mallnav/error.hpp"

namespace mallnav {

void ExtractConfig::validate() const {
  for (const ColorSpec* c : {&major_road_color, &freeway_color, &minor_road_color, &label_color, &walkway_color}) {
    c->validate();
  }
  if (store_color_tolerance < 0 || store_color_tolerance > 255) {
    throw Error(ErrorKind::invalid_argument, "store_color_tolerance must be in [0, 255]");
  }
  if (min_road_halfwidth < 1) throw Error(ErrorKind::invalid_argument, "min_road_halfwidth must be >= 1");
  if (min_store_area < 1) throw Error(ErrorKind::invalid_argument, "min_store_area must be >= 1");
  for (double t : {solidity_min, extent_min}) {
    if (!(t > 0.0 && t <= 1.0)) throw Error(ErrorKind::invalid_argument, "shape thresholds must be in (0, 1]");
  }
  if (min_label_area < 1 || max_label_area < min_label_area) {
    throw Error(ErrorKind::invalid_argument, "label area range is empty");
  }
}

LabeledRegions detect_text_labels(const RasterImage& img, const ExtractConfig& cfg) {
  const LabeledRegions all = connected_components(segment_by_color(img, cfg.label_color), Connectivity::eight);

  LabeledRegions out;
  out.width = all.width;
  out.height = all.height;
  out.label_map.assign(all.label_map.size(), 0);
  std::vector<int> remap(all.regions.size() + 1, 0);
  for (const Region& r : all.regions) {
    if (r.area < cfg.min_label_area || r.area > cfg.max_label_area) continue;
    Region kept = r;
    kept.id = int(out.regions.size()) + 1;
    remap[std::size_t(r.id)] = kept.id;
    out.regions.push_back(std::move(kept));
  }
  for (std::size_t i = 0; i < all.label_map.size(); ++i) out.label_map[i] = remap[std::size_t(all.label_map[i])];
  return out;
}

std::vector<Pixel> label_seed_pixels(const Region& label, int width, int height) {
  constexpr int kRing = 4;
  std::vector<Pixel> seeds;
  const auto push = [&](int x, int y) {
    if (x >= 0 && y >= 0 && x < width && y < height) seeds.push_back({x, y});
  };
  push(int(std::floor(label.centroid.x)), int(std::floor(label.centroid.y)));
  for (int d = 1; d <= kRing; ++d) {
    const int x0 = label.bbox.x0 - d, x1 = label.bbox.x1 + d;
    const int y0 = label.bbox.y0 - d, y1 = label.bbox.y1 + d;
    for (int x = x0; x <= x1; ++x) {
      push(x, y0);
      push(x, y1);
    }
    for (int y = y0 + 1; y < y1; ++y) {
      push(x0, y);
      push(x1, y);
    }
  }
  return seeds;
}

BinaryMask detect_roads(const RasterImage& img, const ExtractConfig& cfg, const LabeledRegions& labels) {
  cfg.validate();
  BinaryMask roads = mask_or(segment_by_color(img, cfg.major_road_color), segment_by_color(img, cfg.freeway_color));

  std::vector<Pixel> seeds;
  for (const Region& label : labels.regions) {
    const auto s = label_seed_pixels(label, img.width(), img.height());
    seeds.insert(seeds.end(), s.begin(), s.end());
  }
  const int h = cfg.min_road_halfwidth;
  // Label ink sits on the road it names; paint it road-colored so it does not narrow the road.
  RasterImage painted = img;
  const bool same_frame = labels.width == img.width() && labels.height == img.height();
  for (int y = 0; same_frame && y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      if (labels.label_at(x, y) != 0) painted.set(x, y, cfg.minor_road_color.reference);
  const BinaryMask core = region_grow(painted, seeds, cfg.minor_road_color, h);

  // The grown core stops h pixels short of the road edge; restore the road body as the
  // white pixels strictly within distance h of a core pixel.
  const BinaryMask white = segment_by_color(img, cfg.minor_road_color);
  BinaryMask body = core;
  std::vector<Pixel> disk;
  for (int dy = -h; dy <= h; ++dy)
    for (int dx = -h; dx <= h; ++dx)
      if (dx * dx + dy * dy < h * h) disk.push_back({dx, dy});
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (!core.at(x, y)) continue;
      for (const Pixel& o : disk) {
        const int nx = x + o.x, ny = y + o.y;
        if (white.in_bounds(nx, ny) && white.at(nx, ny)) body.set(nx, ny, true);
      }
    }
  }
  return mask_or(roads, body);
}

namespace {

struct Candidate {
  Region region;
  Polygon hull;
  std::size_t first_index = 0;
};

// Fills enclosed holes of a pixel set and measures the result.
Candidate measure_blob(const std::vector<Pixel>& pixels, int width) {
  int x0 = pixels.front().x, x1 = x0, y0 = pixels.front().y, y1 = y0;
  for (const Pixel& p : pixels) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  // Local frame with a one-pixel margin so the outside is connected around the blob.
  const int lw = x1 - x0 + 3, lh = y1 - y0 + 3;
  BinaryMask local(lw, lh);
  for (const Pixel& p : pixels) local.set(p.x - x0 + 1, p.y - y0 + 1, true);

  BinaryMask outside_candidates(lw, lh);
  for (int y = 0; y < lh; ++y)
    for (int x = 0; x < lw; ++x) outside_candidates.set(x, y, !local.at(x, y));
  const LabeledRegions bg = connected_components(outside_candidates, Connectivity::eight);
  const int outside_id = bg.label_at(0, 0);
  for (int y = 0; y < lh; ++y)
    for (int x = 0; x < lw; ++x)
      if (!local.at(x, y) && bg.label_at(x, y) != outside_id) local.set(x, y, true);

  const LabeledRegions filled = connected_components(local, Connectivity::eight);
  // The blob is connected, so there is exactly one region.
  Region r = filled.regions.front();
  r.centroid = {r.centroid.x + (x0 - 1), r.centroid.y + (y0 - 1)};
  r.bbox = {r.bbox.x0 + x0 - 1, r.bbox.y0 + y0 - 1, r.bbox.x1 + x0 - 1, r.bbox.y1 + y0 - 1};
  for (Pixel& p : r.boundary) p = {p.x + x0 - 1, p.y + y0 - 1};

  Candidate c;
  c.hull = region_hull(r);
  c.first_index = std::size_t(r.boundary.front().y) * std::size_t(width) + std::size_t(r.boundary.front().x);
  c.region = std::move(r);
  return c;
}

bool passes_shape_filters(const Candidate& c, const ExtractConfig& cfg) {
  if (c.region.area < cfg.min_store_area) return false;
  const ShapeRegularity s = shape_regularity(c.region, c.hull);
  return s.solidity >= cfg.solidity_min && s.extent >= cfg.extent_min;
}

StoreRegion to_store(const Candidate& c, int id, StoreSource source) {
  StoreRegion s;
  s.id = id;
  s.footprint = c.hull;
  s.centroid = c.region.centroid;
  s.area = c.region.area;
  s.source = source;
  return s;
}

std::uint32_t pack(Rgb c) { return (std::uint32_t(c.r) << 16) | (std::uint32_t(c.g) << 8) | c.b; }

Rgb unpack(std::uint32_t v) { return {std::uint8_t(v >> 16), std::uint8_t(v >> 8), std::uint8_t(v)}; }

bool is_point_in_component(const LabeledRegions& comps, int id, Point2 p) {
  const int x = int(std::floor(p.x)), y = int(std::floor(p.y));
  if (x < 0 || y < 0 || x >= comps.width || y >= comps.height) return false;
  return comps.label_at(x, y) == id;
}

}  // namespace

std::vector<StoreRegion> detect_parking_lots(const RasterImage& img, const ExtractConfig& cfg,
                                             const BinaryMask& roads, const LabeledRegions& labels) {
  cfg.validate();
  const BinaryMask candidates = mask_minus(segment_by_color(img, cfg.minor_road_color), roads);
  const LabeledRegions comps = connected_components(candidates, Connectivity::four);

  std::vector<StoreRegion> lots;
  for (const Region& r : comps.regions) {
    if (r.area < 4 * cfg.min_store_area) continue;
    const Polygon hull = region_hull(r);
    const bool labeled = std::any_of(labels.regions.begin(), labels.regions.end(), [&](const Region& label) {
      return is_point_in_component(comps, r.id, label.centroid) || contains(hull, label.centroid);
    });
    if (labeled) continue;
    StoreRegion lot;
    lot.id = int(lots.size()) + 1;
    lot.footprint = hull;
    lot.centroid = r.centroid;
    lot.area = r.area;
    lot.source = StoreSource::map;
    lots.push_back(std::move(lot));
  }
  return lots;
}

BinaryMask detect_walkways(const RasterImage& img, const ExtractConfig& cfg, std::span<const BinaryMask> exclude) {
  cfg.validate();
  BinaryMask walk = segment_by_color(img, cfg.walkway_color);
  for (const BinaryMask& m : exclude) walk = mask_minus(walk, m);
  return walk;
}

std::vector<StoreRegion> detect_stores_map(const RasterImage& img, const ExtractConfig& cfg,
                                           const LabeledRegions& labels) {
  cfg.validate();
  constexpr int kSampleRing = 8;
  constexpr int kSeedRing = 2;
  const int w = img.width();

  std::vector<Candidate> accepted;
  for (const Region& label : labels.regions) {
    // Modal background color in a ring around the label box, ignoring label ink.
    std::map<std::uint32_t, int> histogram;
    std::vector<Pixel> seed_ring;
    for (int y = label.bbox.y0 - kSampleRing; y <= label.bbox.y1 + kSampleRing; ++y) {
      for (int x = label.bbox.x0 - kSampleRing; x <= label.bbox.x1 + kSampleRing; ++x) {
        if (!img.in_bounds(x, y) || labels.label_at(x, y) != 0) continue;
        const int d = std::max({label.bbox.x0 - x, x - label.bbox.x1, label.bbox.y0 - y, y - label.bbox.y1});
        if (d < 1) continue;
        ++histogram[pack(img.at(x, y))];
        if (d <= kSeedRing) seed_ring.push_back({x, y});
      }
    }
    if (histogram.empty()) continue;
    // Highest count wins; std::map iteration makes the smallest packed color win ties.
    const auto mode = std::max_element(histogram.begin(), histogram.end(),
                                       [](const auto& a, const auto& b) { return a.second < b.second; });
    const Rgb background = unpack(mode->first);
    // A label sitting on a road or walkway names that feature, not a store.
    if (cfg.minor_road_color.matches(background) || cfg.major_road_color.matches(background) ||
        cfg.freeway_color.matches(background) || cfg.walkway_color.matches(background)) {
      continue;
    }

    const ColorSpec fill{background, cfg.store_color_tolerance};
    const BinaryMask grown = region_grow(img, seed_ring, fill, 0);
    const LabeledRegions parts = connected_components(grown, Connectivity::four);
    if (parts.regions.empty()) continue;
    const auto largest = std::max_element(parts.regions.begin(), parts.regions.end(),
                                          [](const Region& a, const Region& b) { return a.area < b.area; });
    const std::vector<Pixel> pixels = parts.pixels_of(largest->id);
    Candidate c = measure_blob(pixels, w);
    if (!passes_shape_filters(c, cfg)) continue;
    const bool duplicate = std::any_of(accepted.begin(), accepted.end(), [&](const Candidate& a) {
      return a.first_index == c.first_index && a.region.area == c.region.area;
    });
    if (!duplicate) accepted.push_back(std::move(c));
  }

  std::sort(accepted.begin(), accepted.end(),
            [](const Candidate& a, const Candidate& b) { return a.first_index < b.first_index; });
  std::vector<StoreRegion> stores;
  for (const Candidate& c : accepted) stores.push_back(to_store(c, int(stores.size()) + 1, StoreSource::map));
  return stores;
}

std::vector<StoreRegion> detect_stores_directory(const RasterImage& img, std::span<const ColorSpec> seed_colors,
                                                 const ExtractConfig& cfg) {
  cfg.validate();
  if (seed_colors.empty()) throw Error(ErrorKind::invalid_argument, "detect_stores_directory: no seed colors");
  BinaryMask stores_mask = segment_by_color(img, seed_colors.front());
  for (std::size_t i = 1; i < seed_colors.size(); ++i) {
    stores_mask = mask_or(stores_mask, segment_by_color(img, seed_colors[i]));
  }
  const LabeledRegions comps = connected_components(stores_mask, Connectivity::four);

  std::vector<StoreRegion> stores;
  for (const Region& r : comps.regions) {
    if (r.area < cfg.min_store_area) continue;
    const Candidate c = measure_blob(comps.pixels_of(r.id), img.width());
    if (!passes_shape_filters(c, cfg)) continue;
    stores.push_back(to_store(c, int(stores.size()) + 1, StoreSource::directory));
  }
  return stores;
}

PointSet control_points(std::span<const StoreRegion> stores) {
  std::vector<const StoreRegion*> ordered;
  for (const StoreRegion& s : stores) ordered.push_back(&s);
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto* a, const auto* b) { return a->id < b->id; });
  PointSet out;
  for (const StoreRegion* s : ordered) out.points.push_back(s->centroid);
  return out;
}

std::vector<Polygon> mask_polygons(const BinaryMask& mask, std::int64_t min_area) {
  const LabeledRegions comps = connected_components(mask, Connectivity::four);
  std::vector<Polygon> polys;
  for (const Region& r : comps.regions) {
    if (r.area < min_area) continue;
    polys.push_back(region_hull(r));
  }
  return polys;
}

namespace {

void split_pieces(const std::vector<Pixel>& pixels, std::int64_t min_area, double min_solidity,
                  std::vector<Polygon>& out) {
  if (std::int64_t(pixels.size()) < min_area || pixels.empty()) return;
  int x0 = pixels.front().x, x1 = x0, y0 = pixels.front().y, y1 = y0;
  for (const Pixel& p : pixels) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  BinaryMask local(x1 - x0 + 1, y1 - y0 + 1);
  for (const Pixel& p : pixels) local.set(p.x - x0, p.y - y0, true);
  const LabeledRegions comps = connected_components(local, Connectivity::four);
  for (const Region& r : comps.regions) {
    if (r.area < min_area) continue;
    std::vector<Pixel> part = comps.pixels_of(r.id);
    for (Pixel& p : part) p = {p.x + x0, p.y + y0};
    Polygon hull = region_hull(r);
    const int bw = r.bbox.x1 - r.bbox.x0 + 1, bh = r.bbox.y1 - r.bbox.y0 + 1;
    if (double(r.area) / signed_area(hull) >= min_solidity || std::min(bw, bh) <= 2) {
      for (Point2& v : hull.vertices) v = {v.x + x0, v.y + y0};
      out.push_back(std::move(hull));
      continue;
    }
    std::vector<Pixel> lo, hi;
    const bool vertical_cut = bw >= bh;
    const int cut = vertical_cut ? r.bbox.x0 + x0 + bw / 2 : r.bbox.y0 + y0 + bh / 2;
    for (const Pixel& p : part) ((vertical_cut ? p.x : p.y) < cut ? lo : hi).push_back(p);
    // Halves keep every pixel so the pieces tile the component.
    split_pieces(lo, 1, min_solidity, out);
    split_pieces(hi, 1, min_solidity, out);
  }
}

}  // namespace

std::vector<Polygon> convex_pieces(const BinaryMask& mask, std::int64_t min_area, double min_solidity) {
  if (!(min_solidity > 0.0 && min_solidity <= 1.0)) {
    throw Error(ErrorKind::invalid_argument, "min_solidity must be in (0, 1]");
  }
  const LabeledRegions comps = connected_components(mask, Connectivity::four);
  std::vector<Polygon> out;
  for (const Region& r : comps.regions) split_pieces(comps.pixels_of(r.id), min_area, min_solidity, out);
  return out;
}

BinaryMask footprint_mask(std::span<const StoreRegion> stores, int width, int height) {
  BinaryMask m(width, height);
  for (const StoreRegion& s : stores) rasterize_into(s.footprint, m);
  return m;
}

}  // namespace mallnav

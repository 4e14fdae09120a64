#include "mallnav/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "mallnav/error.hpp"
#include "mallnav/image_io.hpp"

namespace mallnav {

using nlohmann::json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Configuration

namespace {

json color_json(const ColorSpec& c) {
  return {{"reference", {c.reference.r, c.reference.g, c.reference.b}}, {"tolerance", c.tolerance}};
}

ColorSpec color_from(const json& j) {
  const json& ref = j.at("reference");
  if (!ref.is_array() || ref.size() != 3) throw Error(ErrorKind::parse, "color reference must be [r, g, b]");
  ColorSpec c;
  for (std::size_t i = 0; i < 3; ++i) {
    const int v = ref[i].get<int>();
    if (v < 0 || v > 255) throw Error(ErrorKind::parse, "color channel out of [0, 255]");
    (i == 0 ? c.reference.r : i == 1 ? c.reference.g : c.reference.b) = std::uint8_t(v);
  }
  c.tolerance = j.at("tolerance").get<int>();
  c.validate();
  return c;
}

template <class T>
void read_opt(const json& obj, const char* key, T& out) {
  if (const auto it = obj.find(key); it != obj.end()) out = it->get<T>();
}

std::string resolve(const fs::path& base, const std::string& p) {
  if (p.empty()) return p;
  const fs::path path(p);
  return (path.is_absolute() ? path : base / path).lexically_normal().string();
}

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw Error(ErrorKind::invalid_argument, std::string(what) + " path is not set");
  if (!fs::is_regular_file(path)) throw Error(ErrorKind::io, std::string(what) + " not found: " + path);
}

void write_json(const fs::path& path, const json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out << doc.dump(2) << "\n";
}

fs::path ensure_output_dir(const PipelineConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create " + cfg.output_dir + ": " + ec.message());
  return fs::path(cfg.output_dir);
}

json stores_json(std::span<const StoreRegion> stores) {
  json arr = json::array();
  for (const StoreRegion& s : stores) {
    arr.push_back({{"id", s.id},
                   {"footprint", polygon_to_json(s.footprint)},
                   {"centroid", {s.centroid.x, s.centroid.y}},
                   {"area", s.area},
                   {"source", s.source == StoreSource::map ? "map" : "directory"}});
  }
  return arr;
}

}  // namespace

void PipelineConfig::validate() const {
  extract.validate();
  cpd.validate();
  weights.validate();
  narration.validate();
  if (grid_step < 1) throw Error(ErrorKind::invalid_argument, "grid_step must be >= 1");
  if (seed_colors.empty()) throw Error(ErrorKind::invalid_argument, "at least one directory seed color is required");
  for (const ColorSpec& c : seed_colors) c.validate();
  require_file(map_image, "map image");
  require_file(directory_image, "directory image");
  require_file(sidecar, "sidecar");
}

json PipelineConfig::to_json() const {
  json anchor_j = json::array();
  for (const auto& row : anchor.matrix()) anchor_j.push_back({row[0], row[1], row[2]});
  json seeds = json::array();
  for (const ColorSpec& c : seed_colors) seeds.push_back(color_json(c));
  return {{"map_image", map_image},
          {"directory_image", directory_image},
          {"sidecar", sidecar},
          {"output_dir", output_dir},
          {"anchor", anchor_j},
          {"grid_step", grid_step},
          {"seed_colors", seeds},
          {"coarse_prealign", coarse_prealign},
          {"extract",
           {{"major_road_color", color_json(extract.major_road_color)},
            {"freeway_color", color_json(extract.freeway_color)},
            {"minor_road_color", color_json(extract.minor_road_color)},
            {"label_color", color_json(extract.label_color)},
            {"walkway_color", color_json(extract.walkway_color)},
            {"store_color_tolerance", extract.store_color_tolerance},
            {"min_road_halfwidth", extract.min_road_halfwidth},
            {"min_store_area", extract.min_store_area},
            {"solidity_min", extract.solidity_min},
            {"extent_min", extract.extent_min},
            {"min_label_area", extract.min_label_area},
            {"max_label_area", extract.max_label_area}}},
          {"cpd",
           {{"mode", to_string(cpd.mode)},
            {"w", cpd.w},
            {"beta", cpd.beta},
            {"lambda", cpd.lambda},
            {"max_iter", cpd.max_iter},
            {"tol", cpd.tol},
            {"sigma2_floor", cpd.sigma2_floor}}},
          {"weights",
           {{"walkway", weights.walkway},
            {"crossing", weights.crossing},
            {"parking", weights.parking},
            {"unsafe_street_crossing", weights.unsafe_street_crossing}}},
          {"narration",
           {{"distance_unit", to_string(narration.distance_unit)},
            {"step_length_feet", narration.step_length_feet},
            {"frame", to_string(narration.frame)},
            {"vision", to_string(narration.vision)},
            {"pass_radius", narration.pass_radius},
            {"tag_radius", narration.tag_radius}}}};
}

PipelineConfig pipeline_config_from_json(const json& doc, const fs::path& base_dir) {
  if (!doc.is_object()) throw Error(ErrorKind::parse, "config: top level must be an object");
  PipelineConfig c;
  try {
    std::string s;
    read_opt(doc, "map_image", c.map_image);
    read_opt(doc, "directory_image", c.directory_image);
    read_opt(doc, "sidecar", c.sidecar);
    read_opt(doc, "output_dir", c.output_dir);
    c.map_image = resolve(base_dir, c.map_image);
    c.directory_image = resolve(base_dir, c.directory_image);
    c.sidecar = resolve(base_dir, c.sidecar);
    c.output_dir = resolve(base_dir, c.output_dir);
    read_opt(doc, "grid_step", c.grid_step);
    read_opt(doc, "coarse_prealign", c.coarse_prealign);
    if (const auto it = doc.find("anchor"); it != doc.end()) {
      GeoAnchor::Matrix m{};
      if (!it->is_array() || it->size() != 2) throw Error(ErrorKind::parse, "anchor must be a 2x3 array");
      for (std::size_t r = 0; r < 2; ++r) {
        if (!(*it)[r].is_array() || (*it)[r].size() != 3) throw Error(ErrorKind::parse, "anchor must be a 2x3 array");
        for (std::size_t k = 0; k < 3; ++k) m[r][k] = (*it)[r][k].get<double>();
      }
      c.anchor = GeoAnchor(m);
    }
    if (const auto it = doc.find("seed_colors"); it != doc.end()) {
      for (const json& sc : *it) c.seed_colors.push_back(color_from(sc));
    }
    if (const auto it = doc.find("extract"); it != doc.end()) {
      ExtractConfig& e = c.extract;
      for (auto [key, spec] : {std::pair<const char*, ColorSpec*>{"major_road_color", &e.major_road_color},
                               {"freeway_color", &e.freeway_color},
                               {"minor_road_color", &e.minor_road_color},
                               {"label_color", &e.label_color},
                               {"walkway_color", &e.walkway_color}}) {
        if (const auto ct = it->find(key); ct != it->end()) *spec = color_from(*ct);
      }
      read_opt(*it, "store_color_tolerance", e.store_color_tolerance);
      read_opt(*it, "min_road_halfwidth", e.min_road_halfwidth);
      read_opt(*it, "min_store_area", e.min_store_area);
      read_opt(*it, "solidity_min", e.solidity_min);
      read_opt(*it, "extent_min", e.extent_min);
      read_opt(*it, "min_label_area", e.min_label_area);
      read_opt(*it, "max_label_area", e.max_label_area);
    }
    if (const auto it = doc.find("cpd"); it != doc.end()) {
      if (const auto m = it->find("mode"); m != it->end()) c.cpd.mode = parse_cpd_mode(m->get<std::string>());
      read_opt(*it, "w", c.cpd.w);
      read_opt(*it, "beta", c.cpd.beta);
      read_opt(*it, "lambda", c.cpd.lambda);
      read_opt(*it, "max_iter", c.cpd.max_iter);
      read_opt(*it, "tol", c.cpd.tol);
      read_opt(*it, "sigma2_floor", c.cpd.sigma2_floor);
    }
    if (const auto it = doc.find("weights"); it != doc.end()) {
      read_opt(*it, "walkway", c.weights.walkway);
      read_opt(*it, "crossing", c.weights.crossing);
      read_opt(*it, "parking", c.weights.parking);
      read_opt(*it, "unsafe_street_crossing", c.weights.unsafe_street_crossing);
    }
    if (const auto it = doc.find("narration"); it != doc.end()) {
      NarrationConfig& n = c.narration;
      if (const auto v = it->find("distance_unit"); v != it->end()) n.distance_unit = parse_distance_unit(v->get<std::string>());
      if (const auto v = it->find("frame"); v != it->end()) n.frame = parse_frame(v->get<std::string>());
      if (const auto v = it->find("vision"); v != it->end()) n.vision = parse_vision(v->get<std::string>());
      read_opt(*it, "step_length_feet", n.step_length_feet);
      read_opt(*it, "pass_radius", n.pass_radius);
      read_opt(*it, "tag_radius", n.tag_radius);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, std::string("config: ") + e.what());
  }
  return c;
}

PipelineConfig load_pipeline_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open config " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::parse, path + ": malformed JSON: " + e.what());
  }
  return pipeline_config_from_json(doc, fs::path(path).parent_path());
}

// ---------------------------------------------------------------------------
// Stages

json Features::to_json() const {
  json walks = json::array();
  for (const Polygon& p : walkway_polygons) walks.push_back(polygon_to_json(p));
  json map_pts = json::array(), dir_pts = json::array();
  for (const Point2& p : control_points(stores_map).points) map_pts.push_back({p.x, p.y});
  for (const Point2& p : control_points(stores_directory).points) dir_pts.push_back({p.x, p.y});
  return {{"map_size", {map.width(), map.height()}},
          {"directory_size", {directory_width, directory_height}},
          {"label_count", labels.regions.size()},
          {"road_pixels", roads.count()},
          {"walkway_pixels", walkways.count()},
          {"parking", stores_json(parking)},
          {"walkway_polygons", walks},
          {"stores_map", stores_json(stores_map)},
          {"stores_directory", stores_json(stores_directory)},
          {"control_points", {{"map", map_pts}, {"directory", dir_pts}}}};
}

Features extract_features(const PipelineConfig& cfg) {
  cfg.validate();
  Features f;
  f.map = read_png(cfg.map_image);
  const ExtractConfig& e = cfg.extract;
  f.labels = detect_text_labels(f.map, e);
  f.roads = detect_roads(f.map, e, f.labels);
  f.parking = detect_parking_lots(f.map, e, f.roads, f.labels);
  const BinaryMask parking_mask = footprint_mask(f.parking, f.map.width(), f.map.height());
  const BinaryMask exclude[] = {f.roads, parking_mask};
  f.walkways = detect_walkways(f.map, e, exclude);
  f.walkway_polygons = convex_pieces(f.walkways, e.min_store_area);
  f.stores_map = detect_stores_map(f.map, e, f.labels);

  const RasterImage dir = read_png(cfg.directory_image);
  f.directory_width = dir.width();
  f.directory_height = dir.height();
  f.stores_directory = detect_stores_directory(dir, cfg.seed_colors, e);
  return f;
}

Point2 Registration::apply(Point2 p) const {
  if (prealign) p = apply_transform(*prealign, p);
  return apply_transform(result.transform, p);
}

json Registration::summary() const {
  json j = registration_summary(result);
  j["prealign"] = prealign ? transform_to_json(*prealign) : json(nullptr);
  j["unmatched_directory_ids"] = unmatched_directory_ids;
  j["prealign_log_likelihood_trace"] = prealign_trace;
  return j;
}

Registration register_directory(const PipelineConfig& cfg, const Features& features) {
  Registration reg;
  const PointSet map_points = control_points(features.stores_map);
  PointSet dir_points = control_points(features.stores_directory);
  if (cfg.coarse_prealign) {
    CpdParams coarse = cfg.cpd;
    coarse.mode = CpdMode::rigid;
    // Map points are the mixture centroids here; invert to get directory -> map.
    const RegistrationResult swapped = cpd_register(dir_points, map_points, coarse);
    const auto fwd = std::get<RigidTransform>(swapped.transform);
    if (fwd.scale <= 1e-12) {
      throw Error(ErrorKind::degenerate_input, "coarse registration collapsed to zero scale");
    }
    AffineTransform inv;
    inv.matrix = fwd.rotation.transpose() / fwd.scale;
    inv.translation = -(inv.matrix * fwd.translation);
    reg.prealign = inv;
    reg.prealign_trace = swapped.log_likelihood_trace;
    PointSet matched;
    for (std::size_t i = 0; i < dir_points.size(); ++i) {
      if (swapped.outlier_mass(static_cast<Eigen::Index>(i)) < 0.5) {
        matched.points.push_back(apply_transform(inv, dir_points.points[i]));
      } else {
        reg.unmatched_directory_ids.push_back(features.stores_directory[i].id);
      }
    }
    // Too few matches to trust the split; keep every point.
    if (matched.size() < 3) {
      matched = apply_transform(inv, dir_points);
      reg.unmatched_directory_ids.clear();
    }
    dir_points = std::move(matched);
  }
  reg.result = cpd_register(map_points, dir_points, cfg.cpd);
  for (const StoreRegion& s : features.stores_directory) {
    StoreRegion w = s;
    w.footprint.vertices.clear();
    for (const Point2& v : s.footprint.vertices) w.footprint.vertices.push_back(reg.apply(v));
    w.centroid = reg.apply(s.centroid);
    w.area = std::llround(std::abs(signed_area(w.footprint)));
    reg.warped.push_back(std::move(w));
  }
  return reg;
}

FusedMap fuse(const PipelineConfig& cfg, const Features& features, const Registration& reg,
              const NameSidecar& names) {
  BaseLayer base;
  std::error_code ec;
  const fs::path rel = fs::relative(cfg.map_image, cfg.output_dir, ec);
  base.image_path = ec || rel.empty() ? cfg.map_image : rel.generic_string();
  base.width = features.map.width();
  base.height = features.map.height();
  base.anchor = cfg.anchor;

  std::vector<Annotation> annotations;
  for (std::size_t i = 0; i < features.parking.size(); ++i) {
    annotations.push_back({AnnotationKind::parking, features.parking[i].footprint.vertices,
                           "Parking lot " + std::to_string(i + 1), SafetyClass::safe});
  }
  for (const Polygon& p : features.walkway_polygons) {
    annotations.push_back({AnnotationKind::walkway, p.vertices, std::nullopt, SafetyClass::safe});
  }

  Provenance prov;
  prov.registration = reg.summary();
  prov.config = cfg.to_json();
  prov.pixels_per_foot = cfg.anchor.pixels_per_foot();
  return build_fused_map(std::move(base), features.stores_map, reg.warped, names, std::move(annotations),
                         std::move(prov));
}

FusedMap run_pipeline(const PipelineConfig& cfg) {
  const Features f = extract_features(cfg);
  const NameSidecar names = load_sidecar(cfg.sidecar);
  const Registration reg = register_directory(cfg, f);
  return fuse(cfg, f, reg, names);
}

RasterImage render_overlay(const RasterImage& base, std::span<const StoreRegion> warped) {
  RasterImage out = base;
  const BinaryMask m = footprint_mask(warped, base.width(), base.height());
  constexpr Rgb kTint{200, 40, 40};
  for (int y = 0; y < base.height(); ++y) {
    for (int x = 0; x < base.width(); ++x) {
      if (!m.at(x, y)) continue;
      const Rgb c = base.at(x, y);
      out.set(x, y,
              {std::uint8_t((c.r + kTint.r + 1) / 2), std::uint8_t((c.g + kTint.g + 1) / 2),
               std::uint8_t((c.b + kTint.b + 1) / 2)});
    }
  }
  return out;
}

std::pair<BinaryMask, BinaryMask> store_masks(const FusedMap& map) {
  BinaryMask a(map.base.width, map.base.height), b(map.base.width, map.base.height);
  for (const Polygon& p : map.provenance.map_store_footprints) rasterize_into(p, a);
  for (const Store& s : map.directory) rasterize_into(s.footprint, b);
  return {std::move(a), std::move(b)};
}

// ---------------------------------------------------------------------------
// Commands

json cmd_extract(const PipelineConfig& cfg) {
  const Features f = extract_features(cfg);
  const fs::path out = ensure_output_dir(cfg);
  write_mask_png((out / "roads.png").string(), f.roads);
  write_mask_png((out / "parking.png").string(), footprint_mask(f.parking, f.map.width(), f.map.height()));
  write_mask_png((out / "walkways.png").string(), f.walkways);
  const json doc = f.to_json();
  write_json(out / "features.json", doc);
  return doc;
}

json cmd_register(const PipelineConfig& cfg) {
  const Features f = extract_features(cfg);
  const Registration reg = register_directory(cfg, f);
  const fs::path out = ensure_output_dir(cfg);
  const json summary = reg.summary();
  write_json(out / "registration.json", summary);
  write_json(out / "warped_stores.json", stores_json(reg.warped));
  write_png((out / "overlay.png").string(), render_overlay(f.map, reg.warped));
  return summary;
}

std::string cmd_fuse(const PipelineConfig& cfg) {
  const FusedMap map = run_pipeline(cfg);
  const fs::path out = ensure_output_dir(cfg) / "fused_map.json";
  save_fused_map(map, out.string());
  return out.string();
}

NarrationConfig narration_for(const FusedMap& map, NarrationConfig cfg) {
  cfg.pixels_per_foot = map.provenance.pixels_per_foot;
  return cfg;
}

const Store& resolve_store(const FusedMap& map, const std::string& id_or_name) {
  const Store* s = map.find_store(std::string_view(id_or_name));
  if (!s && !id_or_name.empty() && id_or_name.find_first_not_of("0123456789") == std::string::npos) {
    s = map.find_store(std::stoi(id_or_name));
  }
  if (!s) throw Error(ErrorKind::invalid_argument, "unknown store '" + id_or_name + "'");
  return *s;
}

RouteAnswer cmd_route(const FusedMap& map, const std::string& from, const std::string& to, const CostWeights& w,
                      const NarrationConfig& cfg, int grid_step) {
  const Store& a = resolve_store(map, from);
  const Store& b = resolve_store(map, to);
  const WalkGraph g = build_walk_graph(map, grid_step);
  RouteAnswer ans;
  ans.route = route_between_stores(g, a.id, b.id, w);
  ans.utterance = describe_route(map, g, ans.route, cfg);
  return ans;
}

DescribeKind parse_describe_kind(std::string_view text) {
  if (text == "where") return DescribeKind::where;
  if (text == "poi") return DescribeKind::poi;
  if (text == "info") return DescribeKind::info;
  throw Error(ErrorKind::invalid_argument, "describe kind must be where, poi or info");
}

Utterance cmd_describe(const FusedMap& map, const Pose& pose, DescribeKind kind, std::size_t k,
                       const NarrationConfig& cfg, int grid_step) {
  if (!map.in_bounds(pose.position)) throw Error(ErrorKind::out_of_bounds, "pose lies outside the base map");
  switch (kind) {
    case DescribeKind::where: return describe_position(map, build_walk_graph(map, grid_step), pose, cfg);
    case DescribeKind::poi: return describe_poi(map, pose, k, cfg);
    case DescribeKind::info: return extended_info(map, pose, cfg);
  }
  throw Error(ErrorKind::invalid_argument, "unknown describe kind");
}

OverlapReport cmd_eval(const FusedMap& map) {
  const auto [a, b] = store_masks(map);
  return overlap_percentage(a, b);
}

OverlapReport cmd_eval_masks(const std::string& map_mask_png, const std::string& registered_mask_png) {
  return overlap_percentage(read_mask_png(map_mask_png), read_mask_png(registered_mask_png));
}

PrecisionRecall cmd_eval_parking(const FusedMap& map, const std::string& truth_path, double match_dist) {
  std::ifstream in(truth_path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + truth_path);
  std::vector<Point2> truth, detected;
  try {
    const json doc = json::parse(in);
    for (const json& p : doc.at("parking")) truth.push_back({p.at("centroid")[0].get<double>(), p.at("centroid")[1].get<double>()});
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, truth_path + ": " + e.what());
  }
  for (const Annotation& a : map.annotations)
    if (a.kind == AnnotationKind::parking) detected.push_back(a.anchor_point());
  return detection_pr(detected, truth, match_dist);
}

// ---------------------------------------------------------------------------
// Walk-through session

WalkSession::WalkSession(FusedMap map, Pose start, NarrationConfig cfg, CostWeights weights, int grid_step)
    : map_(std::move(map)), pose_(start), cfg_(narration_for(map_, cfg)), weights_(weights) {
  if (!map_.in_bounds(pose_.position)) throw Error(ErrorKind::out_of_bounds, "start pose lies outside the base map");
  pose_.heading = normalize_heading(pose_.heading);
  cfg_.validate();
  weights_.validate();
  graph_ = build_walk_graph(map_, grid_step);
}

std::string WalkSession::execute(const std::string& line) {
  std::istringstream in(line);
  std::string cmd;
  in >> cmd;
  std::string rest;
  std::getline(in >> std::ws, rest);
  try {
    if (cmd.empty()) return "";
    if (cmd == "help") {
      return "Commands: step <feet>, turn <degrees>, face <degrees>, where, poi [k], dest <store>, info, "
             "tag <text>, pose, quit\n";
    }
    if (cmd == "where") return describe_position(map_, graph_, pose_, cfg_).text();
    if (cmd == "poi") {
      const std::size_t k = rest.empty() ? 3 : std::size_t(std::stoul(rest));
      const Utterance u = describe_poi(map_, pose_, k, cfg_);
      return u.sentences.empty() ? "No landmarks nearby.\n" : u.text();
    }
    if (cmd == "info") return extended_info(map_, pose_, cfg_).text();
    if (cmd == "pose") {
      std::ostringstream os;
      os << "x " << pose_.position.x << ", y " << pose_.position.y << ", heading " << pose_.heading << "\n";
      return os.str();
    }
    if (cmd == "turn" || cmd == "face") {
      const double deg = std::stod(rest);
      pose_.heading = normalize_heading(cmd == "turn" ? pose_.heading + deg : deg);
      return "Facing " + compass_word(pose_.heading) + ".\n";
    }
    if (cmd == "step") {
      const double feet = std::stod(rest);
      const double px = feet * cfg_.pixels_per_foot;
      const double h = pose_.heading * std::numbers::pi / 180.0;
      const Point2 next = pose_.position + Point2{px * std::sin(h), -px * std::cos(h)};
      if (!map_.in_bounds(next)) return "That step would leave the map.\n";
      pose_.position = next;
      return "You walked " + format_distance(std::abs(feet), cfg_).text + ".\n";
    }
    if (cmd == "dest") {
      const Store& target = resolve_store(map_, rest);
      const auto anchor = graph_.store_anchors.find(target.id);
      if (anchor == graph_.store_anchors.end()) return target.name + " cannot be reached on foot.\n";
      const auto start = graph_.nearest_node(pose_.position, Terrain::walkway);
      if (!start) return "No walkway nearby.\n";
      const Route r = shortest_walkable_path(graph_, *start, anchor->second, weights_);
      return describe_route(map_, graph_, r, cfg_, pose_.heading).text();
    }
    if (cmd == "tag") {
      if (rest.empty()) return "A tag needs some text.\n";
      const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
      map_ = add_user_tag(map_, {pose_.position, rest, "walker", now});
      return "Tag saved.\n";
    }
    return "Unknown command '" + cmd + "'. Type help for a list.\n";
  } catch (const Error& e) {
    return std::string("Error: ") + e.what() + "\n";
  } catch (const std::invalid_argument&) {
    return "Error: expected a number after '" + cmd + "'\n";
  } catch (const std::out_of_range&) {
    return "Error: number out of range after '" + cmd + "'\n";
  }
}

void run_walk(WalkSession& session, std::istream& in, std::ostream& out) {
  std::string line;
  while (true) {
    out << "> " << std::flush;
    if (!std::getline(in, line)) break;
    if (line == "quit" || line == "exit") break;
    out << session.execute(line);
  }
  out << "\n";
}

}  // namespace mallnav

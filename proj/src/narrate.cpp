#include "mallnav/narrate.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mallnav/error.hpp"

namespace mallnav {

using nlohmann::json;

std::string_view to_string(DistanceUnit u) { return u == DistanceUnit::feet ? "feet" : "steps"; }
std::string_view to_string(Frame f) { return f == Frame::egocentric ? "egocentric" : "allocentric"; }
std::string_view to_string(Vision v) { return v == Vision::blind ? "blind" : "low_vision"; }

DistanceUnit parse_distance_unit(std::string_view text) {
  if (text == "feet") return DistanceUnit::feet;
  if (text == "steps") return DistanceUnit::steps;
  throw Error(ErrorKind::invalid_argument, "distance unit must be feet or steps, got '" + std::string(text) + "'");
}

Frame parse_frame(std::string_view text) {
  if (text == "egocentric") return Frame::egocentric;
  if (text == "allocentric") return Frame::allocentric;
  throw Error(ErrorKind::invalid_argument, "frame must be egocentric or allocentric, got '" + std::string(text) + "'");
}

Vision parse_vision(std::string_view text) {
  if (text == "blind") return Vision::blind;
  if (text == "low_vision") return Vision::low_vision;
  throw Error(ErrorKind::invalid_argument, "vision must be blind or low_vision, got '" + std::string(text) + "'");
}

void NarrationConfig::validate() const {
  if (!(step_length_feet > 0.0)) throw Error(ErrorKind::invalid_argument, "step_length_feet must be > 0");
  if (!(pixels_per_foot > 0.0)) throw Error(ErrorKind::invalid_argument, "pixels_per_foot must be > 0");
  if (!(pass_radius >= 0.0) || !(tag_radius >= 0.0)) {
    throw Error(ErrorKind::invalid_argument, "pass_radius and tag_radius must be >= 0");
  }
}

std::string_view to_string(UtteranceKind k) {
  switch (k) {
    case UtteranceKind::where_am_i: return "where_am_i";
    case UtteranceKind::poi: return "poi";
    case UtteranceKind::destination: return "destination";
    case UtteranceKind::extended: return "extended";
  }
  return "unknown";
}

void Utterance::add(std::string sentence, json fact) {
  sentences.push_back(std::move(sentence));
  facts.push_back(std::move(fact));
}

std::string Utterance::text() const {
  std::string out;
  for (const std::string& s : sentences) out += s + "\n";
  return out;
}

json Utterance::to_json() const { return {{"kind", to_string(kind)}, {"sentences", sentences}, {"facts", facts}}; }

double calibrate_steps(double walked_feet, int steps) {
  if (steps < 1) throw Error(ErrorKind::invalid_argument, "calibration needs at least one step");
  if (!(walked_feet > 0.0)) throw Error(ErrorKind::invalid_argument, "calibration distance must be > 0 feet");
  return walked_feet / steps;
}

json FormattedDistance::to_json() const {
  return {{"text", text}, {"count", count}, {"unit", to_string(unit)}, {"feet", feet}};
}

FormattedDistance format_distance(double feet, const NarrationConfig& cfg) {
  if (!(feet >= 0.0)) throw Error(ErrorKind::invalid_argument, "distance must be >= 0");
  FormattedDistance d;
  d.unit = cfg.distance_unit;
  d.feet = feet;
  if (cfg.distance_unit == DistanceUnit::feet) {
    d.count = std::lround(feet);
    d.text = d.count == 0 ? "less than one foot" : d.count == 1 ? "1 foot" : std::to_string(d.count) + " feet";
  } else {
    d.count = std::lround(feet / cfg.step_length_feet);
    d.text = d.count == 0 ? "less than one step" : d.count == 1 ? "1 step" : std::to_string(d.count) + " steps";
  }
  return d;
}

std::string_view to_string(DirectionTerm t) {
  switch (t) {
    case DirectionTerm::straight_ahead: return "straight ahead";
    case DirectionTerm::diagonally_right: return "diagonally right";
    case DirectionTerm::right: return "to your right";
    case DirectionTerm::behind_right: return "behind you to the right";
    case DirectionTerm::behind: return "behind you";
    case DirectionTerm::behind_left: return "behind you to the left";
    case DirectionTerm::left: return "to your left";
    case DirectionTerm::diagonally_left: return "diagonally left";
  }
  return "unknown";
}

DirectionTerm mirror(DirectionTerm t) { return DirectionTerm((8 - int(t)) % 8); }

namespace {

int sector(double degrees) {
  const int s = int(std::floor((degrees + 22.5) / 45.0)) % 8;
  return s < 0 ? s + 8 : s;
}

}  // namespace

DirectionTerm quantize_direction(double relative_bearing) { return DirectionTerm(sector(relative_bearing)); }

std::string compass_word(double heading) {
  static const char* const kWords[8] = {"North", "Northeast", "East", "Southeast",
                                        "South", "Southwest", "West", "Northwest"};
  return kWords[sector(normalize_heading(heading))];
}

// ---------------------------------------------------------------------------
// Utterances

namespace {

struct Direction {
  std::string words;
  json fact;
};

Direction direction_to(double bearing, double relative_bearing, const NarrationConfig& cfg) {
  if (cfg.frame == Frame::egocentric) {
    const DirectionTerm t = quantize_direction(relative_bearing);
    return {std::string(to_string(t)), {{"frame", "egocentric"}, {"term", to_string(t)}}};
  }
  const std::string word = compass_word(bearing);
  return {"to the " + word, {{"frame", "allocentric"}, {"term", word}}};
}

std::string side_phrase(double heading, bool right, const NarrationConfig& cfg) {
  if (cfg.frame == Frame::egocentric) return right ? "On your right" : "On your left";
  return "To the " + compass_word(heading + (right ? 90.0 : -90.0));
}

json landmark_fact(const Landmark& l, const FormattedDistance& d, const Direction& dir) {
  return {{"landmark", l.name},
          {"landmark_kind", l.kind == LandmarkKind::store ? "store" : "bus_stop"},
          {"landmark_id", l.id},
          {"distance", d.to_json()},
          {"direction", dir.fact},
          {"bearing", l.bearing},
          {"relative_bearing", l.relative_bearing}};
}

std::string landmark_phrase(const Landmark& l, const NarrationConfig& cfg, json& fact) {
  const FormattedDistance d = format_distance(cfg.to_feet(l.distance), cfg);
  const Direction dir = direction_to(l.bearing, l.relative_bearing, cfg);
  fact = landmark_fact(l, d, dir);
  return l.name + ", " + d.text + " " + dir.words;
}

}  // namespace

Utterance describe_position(const FusedMap& map, const WalkGraph& g, const Pose& pose, const NarrationConfig& cfg) {
  cfg.validate();
  Utterance u;
  u.kind = UtteranceKind::where_am_i;
  const double heading = normalize_heading(pose.heading);
  const std::string facing = compass_word(heading);

  const auto node = g.nearest_node(pose.position, std::nullopt, 1.5 * g.grid_step);
  const bool in_parking = node && g.nodes[std::size_t(*node)].terrain == Terrain::parking;
  u.add("Facing " + facing + (in_parking ? ", in a parking lot." : "."),
        {{"type", "orientation"}, {"heading", heading}, {"compass", facing}, {"in_parking", in_parking}});

  const std::vector<Landmark> all = landmarks_by_distance(map, pose);
  if (all.empty()) return u;

  json fact;
  std::string phrase = landmark_phrase(all.front(), cfg, fact);
  fact["type"] = "closest";
  u.add("The closest landmark is " + phrase + ".", fact);

  for (const bool right : {true, false}) {
    const auto it = std::find_if(all.begin(), all.end(), [&](const Landmark& l) {
      return right ? l.relative_bearing > 0.0 : l.relative_bearing < 0.0;
    });
    if (it == all.end()) continue;
    phrase = landmark_phrase(*it, cfg, fact);
    fact["type"] = right ? "nearest_right" : "nearest_left";
    u.add(side_phrase(heading, right, cfg) + ", the nearest landmark is " + phrase + ".", fact);
  }
  return u;
}

Utterance describe_poi(const FusedMap& map, const Pose& pose, std::size_t k, const NarrationConfig& cfg) {
  cfg.validate();
  Utterance u;
  u.kind = UtteranceKind::poi;
  for (const Landmark& l : nearest_landmarks(map, pose, k)) {
    json fact;
    const std::string phrase = landmark_phrase(l, cfg, fact);
    fact["type"] = "poi";
    u.add(phrase + ".", fact);
  }
  return u;
}

namespace {

void douglas_peucker(const std::vector<Point2>& pts, std::size_t lo, std::size_t hi, double tol,
                     std::vector<char>& keep) {
  if (hi <= lo + 1) return;
  double worst = -1.0;
  std::size_t idx = lo;
  for (std::size_t i = lo + 1; i < hi; ++i) {
    const double d = distance_to_segment(pts[i], pts[lo], pts[hi]);
    if (d > worst) {
      worst = d;
      idx = i;
    }
  }
  if (worst <= tol) return;
  keep[idx] = 1;
  douglas_peucker(pts, lo, idx, tol, keep);
  douglas_peucker(pts, idx, hi, tol, keep);
}

struct Segment {
  Point2 a, b;
  double heading() const { return bearing_between(a, b); }
};

// Polyline simplified, then consecutive pieces merged while the turn between them
// quantizes to straight ahead.
std::vector<Segment> maneuver_segments(const std::vector<Point2>& pts, double tol) {
  std::vector<Segment> segs;
  if (pts.size() < 2) return segs;
  std::vector<char> keep(pts.size(), 0);
  keep[0] = 1;
  keep[pts.size() - 1] = 1;
  douglas_peucker(pts, 0, pts.size() - 1, tol, keep);
  std::vector<Point2> simple;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (keep[i]) simple.push_back(pts[i]);

  for (std::size_t i = 1; i < simple.size(); ++i) {
    const Segment s{simple[i - 1], simple[i]};
    if (!segs.empty() &&
        quantize_direction(normalize_relative(s.heading() - segs.back().heading())) == DirectionTerm::straight_ahead) {
      segs.back().b = s.b;
    } else {
      segs.push_back(s);
    }
  }
  return segs;
}

std::string turn_phrase(DirectionTerm t) {
  switch (t) {
    case DirectionTerm::straight_ahead: return "Continue straight ahead";
    case DirectionTerm::behind: return "Turn around";
    case DirectionTerm::behind_right: return "Turn sharply, behind you to the right,";
    case DirectionTerm::behind_left: return "Turn sharply, behind you to the left,";
    default: return "Turn " + std::string(to_string(t));
  }
}

std::optional<int> store_at_node(const WalkGraph& g, int node) {
  for (const auto& [store, n] : g.store_anchors)
    if (n == node) return store;
  return std::nullopt;
}

}  // namespace

Utterance describe_route(const FusedMap& map, const WalkGraph& g, const Route& route, const NarrationConfig& cfg,
                         std::optional<double> start_heading) {
  cfg.validate();
  if (route.nodes.empty()) throw Error(ErrorKind::invalid_argument, "cannot describe an empty route");
  Utterance u;
  u.kind = UtteranceKind::destination;

  std::vector<Point2> pts;
  for (int n : route.nodes) {
    if (n < 0 || std::size_t(n) >= g.nodes.size()) throw Error(ErrorKind::invalid_argument, "route node not in graph");
    pts.push_back(g.nodes[std::size_t(n)].position);
  }
  const std::optional<int> origin = store_at_node(g, route.nodes.front());
  const std::optional<int> destination = store_at_node(g, route.nodes.back());

  const std::vector<Segment> segs = pts.size() > 1 ? maneuver_segments(pts, 1.5 * g.grid_step) : std::vector<Segment>{};
  std::set<int> mentioned_stores;
  std::set<std::size_t> mentioned_tags;

  for (std::size_t i = 0; i < segs.size(); ++i) {
    const Segment& s = segs[i];
    const double heading = s.heading();
    const FormattedDistance d = format_distance(cfg.to_feet(distance(s.a, s.b)), cfg);
    json fact = {{"type", "walk"}, {"segment", i}, {"distance", d.to_json()}, {"heading", heading}};
    std::string sentence;
    std::optional<double> previous = i > 0 ? std::optional<double>(segs[i - 1].heading()) : start_heading;
    if (cfg.frame == Frame::egocentric && previous) {
      const DirectionTerm t = quantize_direction(normalize_relative(heading - *previous));
      fact["direction"] = {{"frame", "egocentric"}, {"term", to_string(t)}};
      sentence = i == 0 ? "Walk " + d.text + " " + std::string(to_string(t)) + "."
                        : turn_phrase(t) + " and walk " + d.text + ".";
    } else {
      const std::string word = compass_word(heading);
      fact["direction"] = {{"frame", cfg.frame == Frame::egocentric ? "egocentric" : "allocentric"}, {"term", word}};
      sentence = "Head " + word + " and walk " + d.text + ".";
    }
    u.add(sentence, fact);

    const Store* pass = nullptr;
    double pass_d = 0.0;
    for (const Store& st : map.directory) {
      if (st.id == origin || st.id == destination || mentioned_stores.count(st.id)) continue;
      const double dd = distance_to_segment(st.centroid, s.a, s.b);
      if (dd <= cfg.pass_radius && (!pass || dd < pass_d || (dd == pass_d && st.id < pass->id))) {
        pass = &st;
        pass_d = dd;
      }
    }
    if (pass) {
      mentioned_stores.insert(pass->id);
      json pf = {{"type", "pass"}, {"segment", i}, {"landmark", pass->name}, {"landmark_id", pass->id}};
      std::string where;
      if (cfg.frame == Frame::egocentric) {
        const bool right = cross(s.b - s.a, pass->centroid - s.a) > 0.0;
        where = right ? "on your right" : "on your left";
        pf["side"] = right ? "right" : "left";
      } else {
        const Point2 foot = [&] {
          const Point2 ab = s.b - s.a;
          const double len2 = dot(ab, ab);
          const double t = len2 > 0.0 ? std::clamp(dot(pass->centroid - s.a, ab) / len2, 0.0, 1.0) : 0.0;
          return s.a + t * ab;
        }();
        const std::string word = compass_word(bearing_between(foot, pass->centroid));
        where = "to the " + word;
        pf["side"] = word;
      }
      u.add("You will pass " + pass->name + " " + where + ".", pf);
    }

    for (std::size_t t = 0; t < map.tags.size(); ++t) {
      const UserTag& tag = map.tags[t];
      if (mentioned_tags.count(t) || distance_to_segment(tag.position, s.a, s.b) > cfg.tag_radius) continue;
      mentioned_tags.insert(t);
      u.add("A note left here by " + tag.author + " says: \"" + tag.text + "\".",
            {{"type", "tag"}, {"segment", i}, {"tag_index", t}, {"author", tag.author}, {"text", tag.text}});
    }
  }

  if (destination) {
    const Store* st = map.find_store(*destination);
    if (st) {
      json fact = {{"type", "arrival"}, {"landmark", st->name}, {"landmark_id", st->id}};
      if (segs.empty()) {
        u.add("You are at " + st->name + ".", fact);
      } else {
        const Point2 end = segs.back().b;
        const double bearing = bearing_between(end, st->centroid);
        const double rel = normalize_relative(bearing - segs.back().heading());
        std::string where;
        if (cfg.frame == Frame::allocentric) {
          where = "to the " + compass_word(bearing);
          fact["side"] = compass_word(bearing);
        } else if (quantize_direction(rel) == DirectionTerm::straight_ahead) {
          where = "straight ahead";
          fact["side"] = "ahead";
        } else {
          where = rel > 0.0 ? "on your right" : "on your left";
          fact["side"] = rel > 0.0 ? "right" : "left";
        }
        u.add(st->name + " will be " + where + ".", fact);
      }
    }
  } else if (segs.empty()) {
    u.add("You have arrived.", {{"type", "arrival"}});
  }
  return u;
}

Utterance extended_info(const FusedMap& map, const Pose& pose, const NarrationConfig& cfg) {
  cfg.validate();
  Utterance u;
  u.kind = UtteranceKind::extended;
  const double heading = normalize_heading(pose.heading);

  struct Near {
    std::size_t index;
    double dist;
    Point2 point;
  };
  std::vector<Near> streets;
  for (std::size_t i = 0; i < map.annotations.size(); ++i) {
    const Annotation& a = map.annotations[i];
    if (a.kind != AnnotationKind::street || a.geometry.size() < 3) continue;
    const Point2 p = nearest_point_on_polygon(a.polygon(), pose.position);
    streets.push_back({i, distance(p, pose.position), p});
  }
  std::stable_sort(streets.begin(), streets.end(), [](const Near& a, const Near& b) { return a.dist < b.dist; });
  if (streets.size() > 2) streets.resize(2);

  for (const Near& s : streets) {
    const Annotation& a = map.annotations[s.index];
    const std::string name = a.name.value_or("An unnamed street");
    json fact = {{"type", "street"}, {"name", name}, {"safety", to_string(a.safety)}};
    std::string sentence;
    if (s.dist <= 0.0) {
      sentence = "You are on " + name + ".";
    } else {
      const double bearing = bearing_between(pose.position, s.point);
      const FormattedDistance d = format_distance(cfg.to_feet(s.dist), cfg);
      const Direction dir = direction_to(bearing, normalize_relative(bearing - heading), cfg);
      fact["distance"] = d.to_json();
      fact["direction"] = dir.fact;
      sentence = name + " is " + d.text + " " + dir.words + ".";
    }
    if (a.safety == SafetyClass::unsafe) sentence += " It is considered unsafe to cross.";
    if (a.safety == SafetyClass::caution) sentence += " Cross it with caution.";
    u.add(sentence, fact);
  }

  std::vector<Near> tags;
  for (std::size_t i = 0; i < map.tags.size(); ++i) {
    const double d = distance(map.tags[i].position, pose.position);
    if (d <= cfg.tag_radius) tags.push_back({i, d, map.tags[i].position});
  }
  std::stable_sort(tags.begin(), tags.end(), [](const Near& a, const Near& b) { return a.dist < b.dist; });
  for (const Near& t : tags) {
    const UserTag& tag = map.tags[t.index];
    const double bearing = bearing_between(pose.position, t.point);
    const FormattedDistance d = format_distance(cfg.to_feet(t.dist), cfg);
    const Direction dir = direction_to(bearing, normalize_relative(bearing - heading), cfg);
    u.add("A note from " + tag.author + ", " + d.text + " " + dir.words + ", says: \"" + tag.text + "\".",
          {{"type", "tag"},
           {"tag_index", t.index},
           {"author", tag.author},
           {"text", tag.text},
           {"distance", d.to_json()},
           {"direction", dir.fact}});
  }

  if (u.sentences.empty()) u.add("No additional information nearby.", {{"type", "none"}});
  return u;
}

}  // namespace mallnav

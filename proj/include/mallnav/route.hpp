#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mallnav/layers.hpp"

namespace mallnav {

enum class Terrain { walkway, crossing, parking };

std::string_view to_string(Terrain t);

struct WalkNode {
  int id = 0;
  Point2 position;
  Terrain terrain = Terrain::walkway;
};

struct WalkEdge {
  int a = 0;
  int b = 0;
  double length = 0.0;
  Terrain terrain = Terrain::walkway;
  /// Crossing over a street marked unsafe.
  bool unsafe = false;
};

struct WalkGraph {
  std::vector<WalkNode> nodes;
  std::vector<WalkEdge> edges;
  std::map<int, int> store_anchors;  // store id -> node id
  std::vector<int> unreachable_stores;
  int grid_step = 4;

  /// Adds a node and returns its id.
  int add_node(Point2 p, Terrain t);
  /// Throws invalid_argument for unknown endpoints or a self-loop.
  void add_edge(int a, int b, Terrain t, bool unsafe = false);

  /// Edge indices incident to each node.
  std::vector<std::vector<int>> adjacency() const;
  /// Number of connected components over all nodes.
  int component_count() const;
  /// Nearest node to `p` (ties to the lowest id), optionally restricted by terrain and radius.
  std::optional<int> nearest_node(Point2 p, std::optional<Terrain> terrain = std::nullopt,
                                  double max_distance = std::numeric_limits<double>::infinity()) const;
};

struct CostWeights {
  double walkway = 1.0;
  double crossing = 2.0;
  double parking = 10.0;
  double unsafe_street_crossing = 5.0;

  void validate() const;
  double multiplier(const WalkEdge& e) const;
};

struct Route {
  std::vector<int> nodes;
  std::vector<Terrain> terrains;  // one per edge
  std::vector<int> edge_indices;
  double total_length = 0.0;
  double total_cost = 0.0;
  bool contains_parking = false;

  /// Share of the route length on walkway edges (1 for a zero-length route).
  double walkway_fraction(const WalkGraph& g) const;
};

/// Heading in degrees clockwise from North, where North is image-up (-y).
struct Pose {
  Point2 position;
  double heading = 0.0;
};

double normalize_heading(double degrees);
/// Maps any angle into (-180, 180].
double normalize_relative(double degrees);
/// Compass bearing of `to` seen from `from`.
double bearing_between(Point2 from, Point2 to);

WalkGraph build_walk_graph(const FusedMap& map, int grid_step = 4);

/// Dijkstra over length x multiplier(terrain); equal costs resolve to the
/// lexicographically smallest node sequence. Throws no_route when dst is unreachable.
Route shortest_walkable_path(const WalkGraph& g, int src, int dst, const CostWeights& w);

/// Route between the anchors of two directory stores.
Route route_between_stores(const WalkGraph& g, int from_store, int to_store, const CostWeights& w);

enum class LandmarkKind { store, bus_stop };

struct Landmark {
  LandmarkKind kind = LandmarkKind::store;
  int id = 0;  // store id, or annotation index for bus stops
  std::string name;
  Point2 position;
  double distance = 0.0;
  double bearing = 0.0;
  double relative_bearing = 0.0;
};

/// All stores and bus stops, nearest first (ties by kind then id).
std::vector<Landmark> landmarks_by_distance(const FusedMap& map, const Pose& pose);
std::vector<Landmark> nearest_landmarks(const FusedMap& map, const Pose& pose, std::size_t k);

nlohmann::json walk_graph_to_json(const WalkGraph& g);
nlohmann::json route_to_json(const Route& r);

}  // namespace mallnav

#include "mallnav/route.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

#include "mallnav/error.hpp"

namespace mallnav {

using nlohmann::json;

std::string_view to_string(Terrain t) {
  switch (t) {
    case Terrain::walkway: return "walkway";
    case Terrain::crossing: return "crossing";
    case Terrain::parking: return "parking";
  }
  return "unknown";
}

int WalkGraph::add_node(Point2 p, Terrain t) {
  const int id = int(nodes.size());
  nodes.push_back({id, p, t});
  return id;
}

void WalkGraph::add_edge(int a, int b, Terrain t, bool unsafe) {
  const int n = int(nodes.size());
  if (a < 0 || b < 0 || a >= n || b >= n) throw Error(ErrorKind::invalid_argument, "edge endpoint out of range");
  if (a == b) throw Error(ErrorKind::invalid_argument, "self-loop edge at node " + std::to_string(a));
  edges.push_back({a, b, distance(nodes[std::size_t(a)].position, nodes[std::size_t(b)].position), t, unsafe});
}

std::vector<std::vector<int>> WalkGraph::adjacency() const {
  std::vector<std::vector<int>> adj(nodes.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    adj[std::size_t(edges[i].a)].push_back(int(i));
    adj[std::size_t(edges[i].b)].push_back(int(i));
  }
  return adj;
}

int WalkGraph::component_count() const {
  std::vector<int> parent(nodes.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = int(i);
  const auto find = [&](int x) {
    while (parent[std::size_t(x)] != x) x = parent[std::size_t(x)] = parent[std::size_t(parent[std::size_t(x)])];
    return x;
  };
  int count = int(nodes.size());
  for (const WalkEdge& e : edges) {
    const int ra = find(e.a), rb = find(e.b);
    if (ra != rb) {
      parent[std::size_t(std::max(ra, rb))] = std::min(ra, rb);
      --count;
    }
  }
  return count;
}

std::optional<int> WalkGraph::nearest_node(Point2 p, std::optional<Terrain> terrain, double max_distance) const {
  std::optional<int> best;
  double best_d = max_distance;
  for (const WalkNode& n : nodes) {
    if (terrain && n.terrain != *terrain) continue;
    const double d = distance(n.position, p);
    if (d < best_d || (d == best_d && !best)) {
      best_d = d;
      best = n.id;
    }
  }
  return best;
}

void CostWeights::validate() const {
  for (double m : {walkway, crossing, parking, unsafe_street_crossing}) {
    if (!(m >= 1.0) || !std::isfinite(m)) throw Error(ErrorKind::invalid_argument, "cost multipliers must be >= 1");
  }
}

double CostWeights::multiplier(const WalkEdge& e) const {
  switch (e.terrain) {
    case Terrain::walkway: return walkway;
    case Terrain::parking: return parking;
    case Terrain::crossing: return e.unsafe ? crossing * unsafe_street_crossing : crossing;
  }
  return walkway;
}

double Route::walkway_fraction(const WalkGraph& g) const {
  if (total_length <= 0.0) return 1.0;
  double walk = 0.0;
  for (int e : edge_indices) {
    const WalkEdge& edge = g.edges[std::size_t(e)];
    if (edge.terrain == Terrain::walkway) walk += edge.length;
  }
  return walk / total_length;
}

double normalize_heading(double degrees) {
  double h = std::fmod(degrees, 360.0);
  if (h < 0.0) h += 360.0;
  return h >= 360.0 ? 0.0 : h;
}

double normalize_relative(double degrees) {
  double r = std::fmod(degrees, 360.0);
  if (r > 180.0) r -= 360.0;
  if (r <= -180.0) r += 360.0;
  return r;
}

double bearing_between(Point2 from, Point2 to) {
  const Point2 d = to - from;
  if (d.x == 0.0 && d.y == 0.0) return 0.0;
  return normalize_heading(std::atan2(d.x, -d.y) * 180.0 / std::numbers::pi);
}

// ---------------------------------------------------------------------------
// Graph construction

namespace {

struct Area {
  Polygon poly;
  BBox box;
  Terrain terrain;
};

bool inside_any(const std::vector<Area>& areas, Point2 p, Terrain* terrain = nullptr) {
  for (const Area& a : areas) {
    if (p.x < a.box.x0 || p.y < a.box.y0 || p.x > a.box.x1 + 1 || p.y > a.box.y1 + 1) continue;
    if (contains(a.poly, p)) {
      if (terrain) *terrain = a.terrain;
      return true;
    }
  }
  return false;
}

}  // namespace

WalkGraph build_walk_graph(const FusedMap& map, int grid_step) {
  if (grid_step < 1) throw Error(ErrorKind::invalid_argument, "grid_step must be >= 1");
  WalkGraph g;
  g.grid_step = grid_step;

  // Walkways first so they take precedence where the two kinds overlap.
  std::vector<Area> areas;
  for (AnnotationKind kind : {AnnotationKind::walkway, AnnotationKind::parking}) {
    for (const Annotation& a : map.annotations) {
      if (a.kind != kind) continue;
      areas.push_back({a.polygon(), pixel_bounds(a.polygon()),
                       kind == AnnotationKind::walkway ? Terrain::walkway : Terrain::parking});
    }
  }

  const int nx = map.base.width / grid_step + 1;
  const int ny = map.base.height / grid_step + 1;
  std::vector<int> grid(std::size_t(nx) * std::size_t(ny), -1);
  const auto at = [&](int gx, int gy) -> int& { return grid[std::size_t(gy) * std::size_t(nx) + std::size_t(gx)]; };
  const auto position = [&](int gx, int gy) { return Point2{gx * grid_step + 0.5, gy * grid_step + 0.5}; };

  for (int gy = 0; gy < ny; ++gy) {
    for (int gx = 0; gx < nx; ++gx) {
      Terrain t{};
      const Point2 p = position(gx, gy);
      if (map.in_bounds(p) && inside_any(areas, p, &t)) at(gx, gy) = g.add_node(p, t);
    }
  }

  constexpr int kOffsets[4][2] = {{1, 0}, {-1, 1}, {0, 1}, {1, 1}};
  for (int gy = 0; gy < ny; ++gy) {
    for (int gx = 0; gx < nx; ++gx) {
      const int a = at(gx, gy);
      if (a < 0) continue;
      for (const auto& o : kOffsets) {
        const int hx = gx + o[0], hy = gy + o[1];
        if (hx < 0 || hx >= nx || hy >= ny) continue;
        const int b = at(hx, hy);
        if (b < 0) continue;
        const Point2 pa = g.nodes[std::size_t(a)].position, pb = g.nodes[std::size_t(b)].position;
        bool inside = true;
        for (double t : {0.25, 0.5, 0.75}) inside = inside && inside_any(areas, pa + t * (pb - pa));
        if (!inside) continue;
        const bool parking =
            g.nodes[std::size_t(a)].terrain == Terrain::parking || g.nodes[std::size_t(b)].terrain == Terrain::parking;
        g.add_edge(a, b, parking ? Terrain::parking : Terrain::walkway);
      }
    }
  }

  const double reach = 10.0 * grid_step;
  for (const Annotation& c : map.annotations) {
    if (c.kind != AnnotationKind::crossing || c.geometry.size() != 2) continue;
    const auto na = g.nearest_node(c.geometry[0], std::nullopt, reach);
    const auto nb = g.nearest_node(c.geometry[1], std::nullopt, reach);
    if (!na || !nb || *na == *nb) continue;
    bool unsafe = c.safety == SafetyClass::unsafe;
    const Point2 mid = c.anchor_point();
    for (const Annotation& s : map.annotations) {
      if (s.kind == AnnotationKind::street && s.safety == SafetyClass::unsafe && s.geometry.size() >= 3 &&
          contains(s.polygon(), mid)) {
        unsafe = true;
      }
    }
    g.add_edge(*na, *nb, Terrain::crossing, unsafe);
  }

  for (const Store& s : map.directory) {
    const auto anchor = g.nearest_node(s.entrance.value_or(s.centroid), Terrain::walkway, reach);
    if (anchor) {
      g.store_anchors[s.id] = *anchor;
    } else {
      g.unreachable_stores.push_back(s.id);
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Shortest paths

namespace {

std::vector<int> path_to(int v, const std::vector<int>& pred_edge, const WalkGraph& g) {
  std::vector<int> path{v};
  while (pred_edge[std::size_t(v)] >= 0) {
    const WalkEdge& e = g.edges[std::size_t(pred_edge[std::size_t(v)])];
    v = e.a == v ? e.b : e.a;
    path.push_back(v);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

Route shortest_walkable_path(const WalkGraph& g, int src, int dst, const CostWeights& w) {
  w.validate();
  const int n = int(g.nodes.size());
  if (src < 0 || src >= n || dst < 0 || dst >= n) {
    throw Error(ErrorKind::invalid_argument,
                "route endpoints out of range: " + std::to_string(src) + " -> " + std::to_string(dst));
  }
  const auto adj = g.adjacency();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(std::size_t(n), kInf);
  std::vector<int> pred_edge(std::size_t(n), -1);
  std::vector<char> done(std::size_t(n), 0);

  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[std::size_t(src)] = 0.0;
  queue.push({0.0, src});
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (done[std::size_t(u)] || d > dist[std::size_t(u)]) continue;
    done[std::size_t(u)] = 1;
    if (u == dst) break;
    for (int ei : adj[std::size_t(u)]) {
      const WalkEdge& e = g.edges[std::size_t(ei)];
      const int v = e.a == u ? e.b : e.a;
      if (done[std::size_t(v)]) continue;
      const double nd = d + e.length * w.multiplier(e);
      double& dv = dist[std::size_t(v)];
      if (nd < dv) {
        dv = nd;
        pred_edge[std::size_t(v)] = ei;
        queue.push({nd, v});
      } else if (nd == dv) {
        std::vector<int> candidate = path_to(u, pred_edge, g);
        candidate.push_back(v);
        if (candidate < path_to(v, pred_edge, g)) pred_edge[std::size_t(v)] = ei;
      }
    }
  }
  if (dist[std::size_t(dst)] == kInf) {
    throw Error(ErrorKind::no_route, "no walkable route from node " + std::to_string(src) + " to node " +
                                         std::to_string(dst));
  }

  Route r;
  r.nodes = path_to(dst, pred_edge, g);
  for (std::size_t i = 1; i < r.nodes.size(); ++i) {
    const int ei = pred_edge[std::size_t(r.nodes[i])];
    const WalkEdge& e = g.edges[std::size_t(ei)];
    r.edge_indices.push_back(ei);
    r.terrains.push_back(e.terrain);
    r.total_length += e.length;
    r.total_cost += e.length * w.multiplier(e);
    r.contains_parking = r.contains_parking || e.terrain == Terrain::parking;
  }
  return r;
}

Route route_between_stores(const WalkGraph& g, int from_store, int to_store, const CostWeights& w) {
  const auto anchor = [&](int store) {
    const auto it = g.store_anchors.find(store);
    if (it == g.store_anchors.end()) {
      throw Error(ErrorKind::no_route, "store " + std::to_string(store) + " has no walkway anchor");
    }
    return it->second;
  };
  return shortest_walkable_path(g, anchor(from_store), anchor(to_store), w);
}

// ---------------------------------------------------------------------------
// Landmarks

std::vector<Landmark> landmarks_by_distance(const FusedMap& map, const Pose& pose) {
  std::vector<Landmark> out;
  const auto make = [&](LandmarkKind kind, int id, std::string name, Point2 p) {
    Landmark l;
    l.kind = kind;
    l.id = id;
    l.name = std::move(name);
    l.position = p;
    l.distance = distance(pose.position, p);
    l.bearing = bearing_between(pose.position, p);
    l.relative_bearing = normalize_relative(l.bearing - normalize_heading(pose.heading));
    return l;
  };
  for (const Store& s : map.directory) out.push_back(make(LandmarkKind::store, s.id, s.name, s.centroid));
  for (std::size_t i = 0; i < map.annotations.size(); ++i) {
    const Annotation& a = map.annotations[i];
    if (a.kind != AnnotationKind::bus_stop) continue;
    out.push_back(make(LandmarkKind::bus_stop, int(i), a.name.value_or("the bus stop"), a.anchor_point()));
  }
  std::stable_sort(out.begin(), out.end(), [](const Landmark& a, const Landmark& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.id < b.id;
  });
  return out;
}

std::vector<Landmark> nearest_landmarks(const FusedMap& map, const Pose& pose, std::size_t k) {
  if (k < 1) throw Error(ErrorKind::invalid_argument, "k must be >= 1");
  std::vector<Landmark> all = landmarks_by_distance(map, pose);
  if (all.size() > k) all.resize(k);
  return all;
}

json walk_graph_to_json(const WalkGraph& g) {
  json nodes = json::array();
  for (const WalkNode& n : g.nodes) {
    nodes.push_back({{"id", n.id}, {"position", {n.position.x, n.position.y}}, {"terrain", to_string(n.terrain)}});
  }
  json edges = json::array();
  for (const WalkEdge& e : g.edges) {
    edges.push_back(
        {{"a", e.a}, {"b", e.b}, {"length", e.length}, {"terrain", to_string(e.terrain)}, {"unsafe", e.unsafe}});
  }
  json anchors = json::object();
  for (const auto& [store, node] : g.store_anchors) anchors[std::to_string(store)] = node;
  return {{"grid_step", g.grid_step},
          {"nodes", nodes},
          {"edges", edges},
          {"store_anchors", anchors},
          {"unreachable_stores", g.unreachable_stores}};
}

json route_to_json(const Route& r) {
  json terrains = json::array();
  for (Terrain t : r.terrains) terrains.push_back(to_string(t));
  return {{"nodes", r.nodes},
          {"terrains", terrains},
          {"total_length", r.total_length},
          {"total_cost", r.total_cost},
          {"contains_parking", r.contains_parking}};
}

}  // namespace mallnav

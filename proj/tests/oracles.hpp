#pragma once

// Slow, obviously-correct reference implementations used by the unit and acceptance tests.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "mallnav/raster.hpp"
#include "mallnav/route.hpp"

namespace mallnav::oracle {

inline BinaryMask random_mask(std::mt19937_64& rng, int w, int h, double density) {
  std::bernoulli_distribution bit(density);
  BinaryMask m(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) m.set(x, y, bit(rng));
  return m;
}

/// Squared distance to the nearest background pixel; off-image pixels are background.
inline std::vector<std::int64_t> edt(const BinaryMask& m) {
  const int w = m.width(), h = m.height();
  std::vector<std::int64_t> out(std::size_t(w) * h, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!m.at(x, y)) continue;
      std::int64_t best = std::min({std::int64_t(x + 1) * (x + 1), std::int64_t(w - x) * (w - x),
                                    std::int64_t(y + 1) * (y + 1), std::int64_t(h - y) * (h - y)});
      for (int v = 0; v < h; ++v)
        for (int u = 0; u < w; ++u)
          if (!m.at(u, v)) best = std::min(best, std::int64_t(u - x) * (u - x) + std::int64_t(v - y) * (v - y));
      out[std::size_t(y) * w + x] = best;
    }
  }
  return out;
}

/// BFS labeling; labels start at 1 and follow the raster order of each component's first pixel.
inline std::vector<std::int32_t> flood_fill_labels(const BinaryMask& m, bool eight) {
  const int w = m.width(), h = m.height();
  std::vector<std::int32_t> lab(std::size_t(w) * h, 0);
  std::int32_t next = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!m.at(x, y) || lab[std::size_t(y) * w + x] != 0) continue;
      ++next;
      std::deque<std::pair<int, int>> q{{x, y}};
      lab[std::size_t(y) * w + x] = next;
      while (!q.empty()) {
        const auto [cx, cy] = q.front();
        q.pop_front();
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if ((dx == 0 && dy == 0) || (!eight && dx != 0 && dy != 0)) continue;
            const int nx = cx + dx, ny = cy + dy;
            if (!m.in_bounds(nx, ny) || !m.at(nx, ny) || lab[std::size_t(ny) * w + nx] != 0) continue;
            lab[std::size_t(ny) * w + nx] = next;
            q.emplace_back(nx, ny);
          }
        }
      }
    }
  }
  return lab;
}

/// Hull vertices by checking every ordered pair as a candidate edge. Exact for integer inputs.
inline std::set<std::pair<double, double>> hull_vertices(const std::vector<Point2>& pts) {
  std::set<std::pair<double, double>> out;
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (pts[i] == pts[j]) continue;
      const Point2 e = pts[j] - pts[i];
      bool edge = true;
      for (std::size_t k = 0; k < n && edge; ++k) {
        const double c = cross(e, pts[k] - pts[i]);
        if (c < 0.0) {
          edge = false;
        } else if (c == 0.0) {
          // Collinear points must lie on the closed segment, so only its extremes become vertices.
          const double t = dot(pts[k] - pts[i], e);
          if (t < 0.0 || t > dot(e, e)) edge = false;
        }
      }
      if (edge) {
        out.insert({pts[i].x, pts[i].y});
        out.insert({pts[j].x, pts[j].y});
      }
    }
  }
  return out;
}

/// Minimum cost over every simple path from src to dst; infinity when unreachable.
inline double enumerate_min_cost(const WalkGraph& g, int src, int dst, const CostWeights& w) {
  const auto adj = g.adjacency();
  std::vector<char> seen(g.nodes.size(), 0);
  double best = std::numeric_limits<double>::infinity();
  std::function<void(int, double)> dfs = [&](int u, double cost) {
    if (u == dst) {
      best = std::min(best, cost);
      return;
    }
    seen[std::size_t(u)] = 1;
    for (const int ei : adj[std::size_t(u)]) {
      const WalkEdge& e = g.edges[std::size_t(ei)];
      const int v = e.a == u ? e.b : e.a;
      if (!seen[std::size_t(v)]) dfs(v, cost + e.length * w.multiplier(e));
    }
    seen[std::size_t(u)] = 0;
  };
  dfs(src, 0.0);
  return best;
}

/// Random graph on n nodes with integer positions; terrains drawn uniformly.
inline WalkGraph random_graph(std::mt19937_64& rng, int n, double edge_prob) {
  WalkGraph g;
  std::uniform_int_distribution<int> coord(0, 40);
  std::uniform_int_distribution<int> terrain(0, 2);
  std::bernoulli_distribution has_edge(edge_prob);
  std::bernoulli_distribution unsafe(0.3);
  for (int i = 0; i < n; ++i) g.add_node({double(coord(rng)), double(coord(rng))}, Terrain::walkway);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (!has_edge(rng) || g.nodes[std::size_t(a)].position == g.nodes[std::size_t(b)].position) continue;
      const auto t = static_cast<Terrain>(terrain(rng));
      g.add_edge(a, b, t, t == Terrain::crossing && unsafe(rng));
    }
  }
  return g;
}

}  // namespace mallnav::oracle

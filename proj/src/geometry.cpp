#include "mallnav/geometry.hpp"

#include <algorithm>
#include <limits>

namespace mallnav {

double signed_area(const Polygon& poly) {
  const auto& v = poly.vertices;
  double twice = 0.0;
  for (std::size_t i = 0, n = v.size(); i < n; ++i) twice += cross(v[i], v[(i + 1) % n]);
  return 0.5 * twice;
}

double distance_to_segment(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + t * ab);
}

namespace {

Point2 nearest_on_segment(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return a;
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return a + t * ab;
}

}  // namespace

bool contains(const Polygon& poly, Point2 p, double eps) {
  const auto& v = poly.vertices;
  const std::size_t n = v.size();
  if (n == 0) return false;
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    if (distance_to_segment(p, v[j], v[i]) <= eps) return true;
    const bool straddles = (v[i].y > p.y) != (v[j].y > p.y);
    if (straddles) {
      const double x_cross = v[j].x + (p.y - v[j].y) * (v[i].x - v[j].x) / (v[i].y - v[j].y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

Point2 nearest_point_on_polygon(const Polygon& poly, Point2 p) {
  const auto& v = poly.vertices;
  if (v.empty()) return p;
  if (v.size() >= 3 && contains(poly, p)) return p;
  Point2 best = v.front();
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0, n = v.size(); i < n; ++i) {
    const Point2 q = nearest_on_segment(p, v[i], v[(i + 1) % n]);
    const double d = distance(p, q);
    if (d < best_d) {
      best_d = d;
      best = q;
    }
  }
  return best;
}

double distance_to_polygon(const Polygon& poly, Point2 p) { return distance(p, nearest_point_on_polygon(poly, p)); }

Point2 polygon_centroid(const Polygon& poly) {
  const auto& v = poly.vertices;
  const double a = signed_area(poly);
  if (v.empty()) return {};
  if (a == 0.0) {
    Point2 s;
    for (const auto& q : v) s = s + q;
    return (1.0 / double(v.size())) * s;
  }
  double cx = 0.0, cy = 0.0;
  for (std::size_t i = 0, n = v.size(); i < n; ++i) {
    const Point2 p = v[i];
    const Point2 q = v[(i + 1) % n];
    const double c = cross(p, q);
    cx += (p.x + q.x) * c;
    cy += (p.y + q.y) * c;
  }
  return {cx / (6.0 * a), cy / (6.0 * a)};
}

BBox pixel_bounds(const Polygon& poly) {
  if (poly.vertices.empty()) return {};
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
  double x1 = -x0, y1 = -x0;
  for (const auto& p : poly.vertices) {
    x0 = std::min(x0, p.x);
    y0 = std::min(y0, p.y);
    x1 = std::max(x1, p.x);
    y1 = std::max(y1, p.y);
  }
  return {int(std::floor(x0)), int(std::floor(y0)), int(std::ceil(x1)), int(std::ceil(y1))};
}

}  // namespace mallnav

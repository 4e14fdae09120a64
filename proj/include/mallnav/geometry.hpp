#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace mallnav {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

/// Integer pixel coordinate.
struct Pixel {
  int x = 0;
  int y = 0;

  friend bool operator==(const Pixel&, const Pixel&) = default;
};

/// Inclusive pixel bounding box.
struct BBox {
  int x0 = 0;
  int y0 = 0;
  int x1 = -1;
  int y1 = -1;

  friend bool operator==(const BBox&, const BBox&) = default;

  std::int64_t area() const {
    return x1 < x0 || y1 < y0 ? 0 : std::int64_t(x1 - x0 + 1) * std::int64_t(y1 - y0 + 1);
  }
};

/// Closed polygon; the last vertex connects back to the first.
struct Polygon {
  std::vector<Point2> vertices;

  friend bool operator==(const Polygon&, const Polygon&) = default;
};

/// Signed shoelace area, positive for counterclockwise order in a y-up frame.
double signed_area(const Polygon& poly);

/// Boundary-inclusive point-in-polygon test (even-odd rule, with an edge tolerance).
bool contains(const Polygon& poly, Point2 p, double eps = 1e-9);

double distance_to_segment(Point2 p, Point2 a, Point2 b);

/// Distance from p to the polygon region; zero inside.
double distance_to_polygon(const Polygon& poly, Point2 p);

/// Nearest point of the polygon region to p (p itself when inside).
Point2 nearest_point_on_polygon(const Polygon& poly, Point2 p);

Point2 polygon_centroid(const Polygon& poly);

/// Bounding box of the vertices, rounded outward to whole pixels.
BBox pixel_bounds(const Polygon& poly);

}  // namespace mallnav

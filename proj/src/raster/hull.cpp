#include <algorithm>

#include "mallnav/error.hpp"
#include "mallnav/raster.hpp"

namespace mallnav {

Polygon convex_hull(std::span<const Point2> points) {
  std::vector<Point2> pts(points.begin(), points.end());
  if (pts.size() < 3) throw Error(ErrorKind::degenerate_input, "convex_hull: fewer than 3 points");
  std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  // Monotone chain; popping on cross <= 0 drops collinear vertices.
  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Point2& p : pts) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    const Point2& p = pts[i];
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0) --k;
    hull[k++] = p;
  }
  hull.resize(k > 0 ? k - 1 : 0);
  if (hull.size() < 3) throw Error(ErrorKind::degenerate_input, "convex_hull: all points collinear");
  return Polygon{std::move(hull)};
}

ShapeRegularity shape_regularity(const Region& region, const Polygon& hull) {
  if (region.area <= 0) throw Error(ErrorKind::invalid_argument, "shape_regularity: empty region");
  const double hull_area = std::abs(signed_area(hull));
  if (hull_area <= 0.0) throw Error(ErrorKind::degenerate_input, "shape_regularity: zero hull area");
  const double bbox_area = double(region.bbox.area());
  return {double(region.area) / hull_area, double(region.area) / bbox_area};
}

Polygon region_hull(const Region& region) {
  std::vector<Point2> corners;
  corners.reserve(4 * region.boundary.size());
  for (const Pixel& p : region.boundary) {
    corners.push_back({double(p.x), double(p.y)});
    corners.push_back({double(p.x + 1), double(p.y)});
    corners.push_back({double(p.x), double(p.y + 1)});
    corners.push_back({double(p.x + 1), double(p.y + 1)});
  }
  return convex_hull(corners);
}

}  // namespace mallnav

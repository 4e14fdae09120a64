#include <deque>
#include <string>

#include "mallnav/error.hpp"
#include "mallnav/raster.hpp"

namespace mallnav {

BinaryMask region_grow(const RasterImage& img, std::span<const Pixel> seeds, const ColorSpec& grow_spec,
                       int min_halfwidth) {
  if (min_halfwidth < 0) throw Error(ErrorKind::invalid_argument, "region_grow: min_halfwidth must be >= 0");
  for (const Pixel& s : seeds) {
    if (!img.in_bounds(s.x, s.y)) {
      throw Error(ErrorKind::out_of_bounds,
                  "region_grow: seed (" + std::to_string(s.x) + ", " + std::to_string(s.y) + ") out of bounds");
    }
  }

  BinaryMask allowed = segment_by_color(img, grow_spec);
  if (min_halfwidth > 0) {
    const DistanceField dt = distance_transform(allowed);
    const std::int64_t floor2 = std::int64_t(min_halfwidth) * min_halfwidth;
    auto bits = allowed.bytes();
    for (std::size_t i = 0; i < bits.size(); ++i)
      if (dt.values[i] < floor2) bits[i] = 0;
  }

  BinaryMask grown(img.width(), img.height());
  std::deque<Pixel> queue;
  for (const Pixel& s : seeds) {
    if (!allowed.at(s.x, s.y) || grown.at(s.x, s.y)) continue;
    grown.set(s.x, s.y, true);
    queue.push_back(s);
    while (!queue.empty()) {
      const Pixel p = queue.front();
      queue.pop_front();
      const Pixel next[4] = {{p.x + 1, p.y}, {p.x - 1, p.y}, {p.x, p.y + 1}, {p.x, p.y - 1}};
      for (const Pixel& q : next) {
        if (!allowed.in_bounds(q.x, q.y) || !allowed.at(q.x, q.y) || grown.at(q.x, q.y)) continue;
        grown.set(q.x, q.y, true);
        queue.push_back(q);
      }
    }
  }
  return grown;
}

}  // namespace mallnav

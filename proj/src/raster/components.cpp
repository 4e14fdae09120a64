#include <array>
#include <deque>

#include "mallnav/error.hpp"
#include "mallnav/raster.hpp"

namespace mallnav {

LabeledRegions connected_components(const BinaryMask& mask, Connectivity connectivity) {
  const int w = mask.width();
  const int h = mask.height();
  if (w <= 0 || h <= 0) throw Error(ErrorKind::invalid_argument, "connected_components: empty mask");

  static constexpr std::array<Pixel, 8> kOffsets = {
      Pixel{1, 0}, Pixel{-1, 0}, Pixel{0, 1}, Pixel{0, -1}, Pixel{1, 1}, Pixel{-1, 1}, Pixel{1, -1}, Pixel{-1, -1}};
  const int n_offsets = connectivity == Connectivity::eight ? 8 : 4;

  LabeledRegions out;
  out.width = w;
  out.height = h;
  out.label_map.assign(std::size_t(w) * h, 0);

  std::deque<Pixel> queue;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.at(x, y) || out.label_at(x, y) != 0) continue;
      const int id = int(out.regions.size()) + 1;
      Region r;
      r.id = id;
      r.bbox = {x, y, x, y};
      double sx = 0.0, sy = 0.0;
      out.label_map[std::size_t(y) * w + x] = id;
      queue.push_back({x, y});
      while (!queue.empty()) {
        const Pixel p = queue.front();
        queue.pop_front();
        ++r.area;
        sx += p.x;
        sy += p.y;
        r.bbox.x0 = std::min(r.bbox.x0, p.x);
        r.bbox.y0 = std::min(r.bbox.y0, p.y);
        r.bbox.x1 = std::max(r.bbox.x1, p.x);
        r.bbox.y1 = std::max(r.bbox.y1, p.y);
        for (int k = 0; k < n_offsets; ++k) {
          const int nx = p.x + kOffsets[k].x;
          const int ny = p.y + kOffsets[k].y;
          if (!mask.in_bounds(nx, ny) || !mask.at(nx, ny)) continue;
          auto& slot = out.label_map[std::size_t(ny) * w + nx];
          if (slot != 0) continue;
          slot = id;
          queue.push_back({nx, ny});
        }
      }
      r.centroid = {sx / double(r.area) + 0.5, sy / double(r.area) + 0.5};
      out.regions.push_back(std::move(r));
    }
  }

  // Boundary pixels, collected in one raster pass so each list is in raster order.
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int id = out.label_at(x, y);
      if (id == 0) continue;
      bool edge = false;
      for (int k = 0; k < 4 && !edge; ++k) {
        const int nx = x + kOffsets[k].x;
        const int ny = y + kOffsets[k].y;
        edge = !mask.in_bounds(nx, ny) || out.label_at(nx, ny) != id;
      }
      if (edge) out.regions[id - 1].boundary.push_back({x, y});
    }
  }
  return out;
}

std::vector<Pixel> LabeledRegions::pixels_of(int id) const {
  std::vector<Pixel> px;
  if (id <= 0 || id > int(regions.size())) return px;
  const BBox& b = regions[id - 1].bbox;
  for (int y = b.y0; y <= b.y1; ++y)
    for (int x = b.x0; x <= b.x1; ++x)
      if (label_at(x, y) == id) px.push_back({x, y});
  return px;
}

BinaryMask LabeledRegions::mask_of(int id) const {
  BinaryMask m(width, height);
  for (const Pixel& p : pixels_of(id)) m.set(p.x, p.y, true);
  return m;
}

}  // namespace mallnav

#include <limits>

#include "mallnav/error.hpp"
#include "mallnav/raster.hpp"

namespace mallnav {

namespace {

// Lower envelope of parabolas (Felzenszwalb & Huttenlocher). f holds finite squared
// column distances; the result is exact because only the envelope choice uses floating point.
void envelope_1d(const std::int64_t* f, int n, std::int64_t* d, std::vector<int>& v, std::vector<double>& z) {
  v.assign(std::size_t(n), 0);
  z.assign(std::size_t(n) + 1, 0.0);
  int k = 0;
  v[0] = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  for (int q = 1; q < n; ++q) {
    double s = 0.0;
    while (true) {
      const std::int64_t p = v[k];
      s = double((f[q] + std::int64_t(q) * q) - (f[p] + p * p)) / double(2 * (q - p));
      if (s > z[k]) break;
      --k;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = std::numeric_limits<double>::infinity();
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const std::int64_t dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

}  // namespace

DistanceField distance_transform(const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  if (w <= 0 || h <= 0) throw Error(ErrorKind::invalid_argument, "distance_transform: empty mask");

  // Column pass: squared vertical distance to background, where rows -1 and h are background.
  std::vector<std::int64_t> col(std::size_t(w) * h);
  std::vector<int> up(static_cast<std::size_t>(h));
  for (int x = 0; x < w; ++x) {
    int last = -1;
    for (int y = 0; y < h; ++y) {
      if (!mask.at(x, y)) last = y;
      up[y] = y - last;
    }
    last = h;
    for (int y = h - 1; y >= 0; --y) {
      if (!mask.at(x, y)) last = y;
      const std::int64_t dy = std::min(up[y], last - y);
      col[std::size_t(y) * w + x] = dy * dy;
    }
  }

  // Row pass over a padded row: columns -1 and w are background.
  DistanceField out;
  out.width = w;
  out.height = h;
  out.values.resize(std::size_t(w) * h);
  const int n = w + 2;
  std::vector<std::int64_t> f(static_cast<std::size_t>(n)), d(static_cast<std::size_t>(n));
  std::vector<int> v;
  std::vector<double> z;
  for (int y = 0; y < h; ++y) {
    f[0] = 0;
    f[std::size_t(n) - 1] = 0;
    for (int x = 0; x < w; ++x) f[std::size_t(x) + 1] = col[std::size_t(y) * w + x];
    envelope_1d(f.data(), n, d.data(), v, z);
    for (int x = 0; x < w; ++x) out.values[std::size_t(y) * w + x] = d[std::size_t(x) + 1];
  }
  return out;
}

}  // namespace mallnav

#include <cstdlib>

#include "mallnav/simd.hpp"

namespace mallnav::simd::scalar {

void color_match(const std::uint8_t* rgb, std::size_t n_pixels, const std::uint8_t ref[3], int tol,
                 std::uint8_t* out) {
  for (std::size_t i = 0; i < n_pixels; ++i) {
    const std::uint8_t* p = rgb + 3 * i;
    const int d0 = std::abs(int(p[0]) - int(ref[0]));
    const int d1 = std::abs(int(p[1]) - int(ref[1]));
    const int d2 = std::abs(int(p[2]) - int(ref[2]));
    out[i] = (d0 <= tol && d1 <= tol && d2 <= tol) ? 1 : 0;
  }
}

void squared_distances(double px, double py, const double* xs, const double* ys, std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = px - xs[i];
    const double dy = py - ys[i];
    const double sx = dx * dx;
    const double sy = dy * dy;
    out[i] = sx + sy;
  }
}

std::int64_t and_count(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  std::int64_t total = 0;
  for (std::size_t i = 0; i < n; ++i) total += (a[i] & b[i]);
  return total;
}

std::int64_t count_ones(const std::uint8_t* a, std::size_t n) {
  std::int64_t total = 0;
  for (std::size_t i = 0; i < n; ++i) total += a[i];
  return total;
}

}  // namespace mallnav::simd::scalar

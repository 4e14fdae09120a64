#include <arm_neon.h>

#include "mallnav/simd.hpp"

namespace mallnav::simd::neon {

void color_match(const std::uint8_t* rgb, std::size_t n_pixels, const std::uint8_t ref[3], int tol,
                 std::uint8_t* out) {
  uint8x16_t lo[3];
  uint8x16_t hi[3];
  for (int c = 0; c < 3; ++c) {
    const int l = int(ref[c]) - tol;
    const int h = int(ref[c]) + tol;
    lo[c] = vdupq_n_u8(std::uint8_t(l < 0 ? 0 : l));
    hi[c] = vdupq_n_u8(std::uint8_t(h > 255 ? 255 : h));
  }
  const uint8x16_t one = vdupq_n_u8(1);
  std::size_t i = 0;
  for (; i + 16 <= n_pixels; i += 16) {
    const uint8x16x3_t px = vld3q_u8(rgb + 3 * i);
    uint8x16_t ok = vandq_u8(vcgeq_u8(px.val[0], lo[0]), vcleq_u8(px.val[0], hi[0]));
    ok = vandq_u8(ok, vandq_u8(vcgeq_u8(px.val[1], lo[1]), vcleq_u8(px.val[1], hi[1])));
    ok = vandq_u8(ok, vandq_u8(vcgeq_u8(px.val[2], lo[2]), vcleq_u8(px.val[2], hi[2])));
    vst1q_u8(out + i, vandq_u8(ok, one));
  }
  scalar::color_match(rgb + 3 * i, n_pixels - i, ref, tol, out + i);
}

void squared_distances(double px, double py, const double* xs, const double* ys, std::size_t n, double* out) {
  const float64x2_t vx = vdupq_n_f64(px);
  const float64x2_t vy = vdupq_n_f64(py);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t dx = vsubq_f64(vx, vld1q_f64(xs + i));
    const float64x2_t dy = vsubq_f64(vy, vld1q_f64(ys + i));
    vst1q_f64(out + i, vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy)));
  }
  scalar::squared_distances(px, py, xs + i, ys + i, n - i, out + i);
}

std::int64_t and_count(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  std::int64_t total = 0;
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) total += vaddlvq_u8(vandq_u8(vld1q_u8(a + i), vld1q_u8(b + i)));
  return total + scalar::and_count(a + i, b + i, n - i);
}

std::int64_t count_ones(const std::uint8_t* a, std::size_t n) {
  std::int64_t total = 0;
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) total += vaddlvq_u8(vld1q_u8(a + i));
  return total + scalar::count_ones(a + i, n - i);
}

}  // namespace mallnav::simd::neon

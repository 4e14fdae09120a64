// Compiled with -mavx2. Keep this translation unit free of standard-library
// templates so no AVX2-encoded inline function can be picked up by the linker
// for use on a CPU without AVX2.

#include <immintrin.h>

#include "mallnav/simd.hpp"

namespace mallnav::simd::avx2 {

namespace {

// Per-byte bounds for 32 interleaved RGB bytes starting at channel `phase`.
struct ChannelBounds {
  __m256i lo;
  __m256i hi;
};

ChannelBounds make_bounds(const std::uint8_t lo3[3], const std::uint8_t hi3[3], int phase) {
  alignas(32) std::uint8_t lo[32];
  alignas(32) std::uint8_t hi[32];
  for (int k = 0; k < 32; ++k) {
    lo[k] = lo3[(k + phase) % 3];
    hi[k] = hi3[(k + phase) % 3];
  }
  return {_mm256_load_si256(reinterpret_cast<const __m256i*>(lo)),
          _mm256_load_si256(reinterpret_cast<const __m256i*>(hi))};
}

inline std::uint32_t in_range_bits(const std::uint8_t* p, const ChannelBounds& b) {
  const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
  const __m256i clamped = _mm256_min_epu8(_mm256_max_epu8(v, b.lo), b.hi);
  return std::uint32_t(_mm256_movemask_epi8(_mm256_cmpeq_epi8(clamped, v)));
}

}  // namespace

void color_match(const std::uint8_t* rgb, std::size_t n_pixels, const std::uint8_t ref[3], int tol,
                 std::uint8_t* out) {
  std::uint8_t lo3[3];
  std::uint8_t hi3[3];
  for (int c = 0; c < 3; ++c) {
    const int lo = int(ref[c]) - tol;
    const int hi = int(ref[c]) + tol;
    lo3[c] = std::uint8_t(lo < 0 ? 0 : lo);
    hi3[c] = std::uint8_t(hi > 255 ? 255 : hi);
  }
  // 32 pixels = 96 bytes = three vectors with channel phases 0, 2, 1.
  const ChannelBounds b0 = make_bounds(lo3, hi3, 0);
  const ChannelBounds b1 = make_bounds(lo3, hi3, 2);
  const ChannelBounds b2 = make_bounds(lo3, hi3, 1);

  std::size_t i = 0;
  for (; i + 32 <= n_pixels; i += 32) {
    const std::uint8_t* p = rgb + 3 * i;
    const unsigned __int128 m = (unsigned __int128)in_range_bits(p, b0) |
                                ((unsigned __int128)in_range_bits(p + 32, b1) << 32) |
                                ((unsigned __int128)in_range_bits(p + 64, b2) << 64);
    const unsigned __int128 all3 = m & (m >> 1) & (m >> 2);
    for (int k = 0; k < 32; ++k) out[i + k] = std::uint8_t((all3 >> (3 * k)) & 1u);
  }
  scalar::color_match(rgb + 3 * i, n_pixels - i, ref, tol, out + i);
}

void squared_distances(double px, double py, const double* xs, const double* ys, std::size_t n, double* out) {
  const __m256d vx = _mm256_set1_pd(px);
  const __m256d vy = _mm256_set1_pd(py);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(vx, _mm256_loadu_pd(xs + i));
    const __m256d dy = _mm256_sub_pd(vy, _mm256_loadu_pd(ys + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
  }
  scalar::squared_distances(px, py, xs + i, ys + i, n - i, out + i);
}

namespace {

inline std::int64_t horizontal_sum(__m256i sad) {
  const __m128i s = _mm_add_epi64(_mm256_castsi256_si128(sad), _mm256_extracti128_si256(sad, 1));
  return _mm_cvtsi128_si64(s) + _mm_extract_epi64(s, 1);
}

}  // namespace

std::int64_t and_count(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  __m256i acc = _mm256_setzero_si256();
  const __m256i zero = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    acc = _mm256_add_epi64(acc, _mm256_sad_epu8(_mm256_and_si256(va, vb), zero));
  }
  return horizontal_sum(acc) + scalar::and_count(a + i, b + i, n - i);
}

std::int64_t count_ones(const std::uint8_t* a, std::size_t n) {
  __m256i acc = _mm256_setzero_si256();
  const __m256i zero = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    acc = _mm256_add_epi64(acc, _mm256_sad_epu8(va, zero));
  }
  return horizontal_sum(acc) + scalar::count_ones(a + i, n - i);
}

}  // namespace mallnav::simd::avx2

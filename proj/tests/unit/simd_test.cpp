#include <gtest/gtest.h>

#include <cstring>
#include <random>
#include <vector>

#include "mallnav/error.hpp"
#include "mallnav/simd.hpp"

namespace mallnav::simd {
namespace {

struct Variant {
  const char* name;
  void (*color_match)(const std::uint8_t*, std::size_t, const std::uint8_t[3], int, std::uint8_t*);
  void (*squared_distances)(double, double, const double*, const double*, std::size_t, double*);
  std::int64_t (*and_count)(const std::uint8_t*, const std::uint8_t*, std::size_t);
  std::int64_t (*count_ones)(const std::uint8_t*, std::size_t);
};

std::vector<Variant> accelerated() {
  std::vector<Variant> v;
#if defined(MALLNAV_HAVE_AVX2)
  if (isa_supported(Isa::avx2)) {
    v.push_back({"avx2", avx2::color_match, avx2::squared_distances, avx2::and_count, avx2::count_ones});
  }
#endif
#if defined(MALLNAV_HAVE_NEON)
  if (isa_supported(Isa::neon)) {
    v.push_back({"neon", neon::color_match, neon::squared_distances, neon::and_count, neon::count_ones});
  }
#endif
  return v;
}

// Lengths straddle every vector width and tail size.
const std::size_t kLengths[] = {0, 1, 7, 15, 16, 17, 31, 32, 33, 63, 64, 65, 100, 1023, 4099};

TEST(Simd, ScalarColorMatchReference) {
  const std::uint8_t rgb[] = {10, 20, 30, 13, 20, 30, 14, 20, 30, 10, 20, 255};
  const std::uint8_t ref[3] = {10, 20, 30};
  std::uint8_t out[4];
  scalar::color_match(rgb, 4, ref, 3, out);
  EXPECT_EQ(std::vector<int>(out, out + 4), (std::vector<int>{1, 1, 0, 0}));
}

TEST(Simd, ScalarCounts) {
  const std::uint8_t a[] = {1, 0, 1, 1, 0};
  const std::uint8_t b[] = {1, 1, 0, 1, 0};
  EXPECT_EQ(scalar::and_count(a, b, 5), 2);
  EXPECT_EQ(scalar::count_ones(a, 5), 3);
}

TEST(Simd, VariantsMatchScalar) {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> byte(0, 255);
  std::uniform_int_distribution<int> bit(0, 1);
  std::uniform_real_distribution<double> coord(-1e3, 1e3);
  for (const Variant& v : accelerated()) {
    SCOPED_TRACE(v.name);
    for (const std::size_t n : kLengths) {
      std::vector<std::uint8_t> rgb(3 * n);
      for (auto& c : rgb) c = std::uint8_t(byte(rng));
      for (const int tol : {0, 1, 12, 128, 255}) {
        const std::uint8_t ref[3] = {std::uint8_t(byte(rng)), std::uint8_t(byte(rng)), std::uint8_t(byte(rng))};
        std::vector<std::uint8_t> a(n + 1, 7), b(n + 1, 7);
        scalar::color_match(rgb.data(), n, ref, tol, a.data());
        v.color_match(rgb.data(), n, ref, tol, b.data());
        ASSERT_EQ(a, b) << "n=" << n << " tol=" << tol;
      }

      std::vector<double> xs(n), ys(n);
      for (std::size_t i = 0; i < n; ++i) {
        xs[i] = coord(rng);
        ys[i] = coord(rng);
      }
      std::vector<double> da(n), db(n);
      const double px = coord(rng), py = coord(rng);
      scalar::squared_distances(px, py, xs.data(), ys.data(), n, da.data());
      v.squared_distances(px, py, xs.data(), ys.data(), n, db.data());
      ASSERT_EQ(0, n == 0 ? 0 : std::memcmp(da.data(), db.data(), n * sizeof(double))) << "n=" << n;

      std::vector<std::uint8_t> m1(n), m2(n);
      for (std::size_t i = 0; i < n; ++i) {
        m1[i] = std::uint8_t(bit(rng));
        m2[i] = std::uint8_t(bit(rng));
      }
      ASSERT_EQ(scalar::and_count(m1.data(), m2.data(), n), v.and_count(m1.data(), m2.data(), n));
      ASSERT_EQ(scalar::count_ones(m1.data(), n), v.count_ones(m1.data(), n));
    }
  }
}

TEST(Simd, OverrideSelectsVariant) {
  set_isa_override(Isa::scalar);
  EXPECT_EQ(active_isa(), Isa::scalar);
  const std::uint8_t a[] = {1, 1, 0};
  EXPECT_EQ(count_ones(a, 3), 2);
  set_isa_override(std::nullopt);
  EXPECT_TRUE(isa_supported(active_isa()));
  EXPECT_TRUE(isa_supported(Isa::scalar));
#if !defined(MALLNAV_HAVE_NEON)
  EXPECT_THROW(set_isa_override(Isa::neon), Error);
#endif
}

}  // namespace
}  // namespace mallnav::simd

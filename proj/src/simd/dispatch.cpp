#include <atomic>
#include <cstdlib>
#include <string>

#include "mallnav/error.hpp"
#include "mallnav/simd.hpp"

namespace mallnav::simd {

namespace {

constexpr int kNoOverride = -1;
std::atomic<int> g_override{kNoOverride};

Isa default_isa() {
  static const Isa isa = [] {
    if (const char* env = std::getenv("MALLNAV_SIMD")) {
      const std::string want(env);
      for (Isa candidate : {Isa::scalar, Isa::avx2, Isa::neon}) {
        if (want == isa_name(candidate) && isa_supported(candidate)) return candidate;
      }
    }
    return detect_isa();
  }();
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(MALLNAV_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
#if defined(MALLNAV_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa detect_isa() {
  if (isa_supported(Isa::avx2)) return Isa::avx2;
  if (isa_supported(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

Isa active_isa() {
  const int o = g_override.load(std::memory_order_relaxed);
  return o == kNoOverride ? default_isa() : Isa(o);
}

void set_isa_override(std::optional<Isa> isa) {
  if (isa && !isa_supported(*isa)) {
    throw Error(ErrorKind::invalid_argument, "SIMD variant not supported: " + std::string(isa_name(*isa)));
  }
  g_override.store(isa ? int(*isa) : kNoOverride, std::memory_order_relaxed);
}

#if defined(MALLNAV_HAVE_AVX2)
#define MALLNAV_AVX2_CASE(call) \
  case Isa::avx2:               \
    return avx2::call;
#else
#define MALLNAV_AVX2_CASE(call)
#endif

#if defined(MALLNAV_HAVE_NEON)
#define MALLNAV_NEON_CASE(call) \
  case Isa::neon:               \
    return neon::call;
#else
#define MALLNAV_NEON_CASE(call)
#endif

#define MALLNAV_DISPATCH(call)  \
  switch (active_isa()) {       \
    MALLNAV_AVX2_CASE(call)     \
    MALLNAV_NEON_CASE(call)     \
    default:                    \
      return scalar::call;      \
  }

void color_match(const std::uint8_t* rgb, std::size_t n_pixels, const std::uint8_t ref[3], int tol,
                 std::uint8_t* out) {
  MALLNAV_DISPATCH(color_match(rgb, n_pixels, ref, tol, out))
}

void squared_distances(double px, double py, const double* xs, const double* ys, std::size_t n, double* out) {
  MALLNAV_DISPATCH(squared_distances(px, py, xs, ys, n, out))
}

std::int64_t and_count(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  MALLNAV_DISPATCH(and_count(a, b, n))
}

std::int64_t count_ones(const std::uint8_t* a, std::size_t n) { MALLNAV_DISPATCH(count_ones(a, n)) }

}  // namespace mallnav::simd

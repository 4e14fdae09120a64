#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

// Data-parallel inner loops. Each kernel has a scalar reference and, where the
// target supports it, an AVX2 (x86-64) or NEON (aarch64) variant. All variants
// produce bit-identical results; the active one is chosen once at runtime.

namespace mallnav::simd {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);

/// Best variant supported by this CPU and build.
Isa detect_isa();

/// Variant used by the dispatching entry points. Honors MALLNAV_SIMD=scalar|avx2|neon
/// (an unsupported request falls back to detect_isa()).
Isa active_isa();

/// Forces a variant for the calling process; nullopt restores the default.
/// Throws invalid_argument if the variant is not supported here.
void set_isa_override(std::optional<Isa> isa);

bool isa_supported(Isa isa);

// out[i] = 1 iff max_c |rgb[3i+c] - ref[c]| <= tol, else 0.
void color_match(const std::uint8_t* rgb, std::size_t n_pixels, const std::uint8_t ref[3], int tol,
                 std::uint8_t* out);

// out[m] = (px - xs[m])^2 + (py - ys[m])^2, evaluated without fused multiply-add.
void squared_distances(double px, double py, const double* xs, const double* ys, std::size_t n, double* out);

// Number of positions where a[i] != 0 && b[i] != 0; inputs are 0/1 bytes.
std::int64_t and_count(const std::uint8_t* a, const std::uint8_t* b, std::size_t n);

// Number of nonzero bytes; inputs are 0/1 bytes.
std::int64_t count_ones(const std::uint8_t* a, std::size_t n);

// Per-variant entry points, exposed for equivalence tests.
namespace scalar {
void color_match(const std::uint8_t* rgb, std::size_t n_pixels, const std::uint8_t ref[3], int tol,
                 std::uint8_t* out);
void squared_distances(double px, double py, const double* xs, const double* ys, std::size_t n, double* out);
std::int64_t and_count(const std::uint8_t* a, const std::uint8_t* b, std::size_t n);
std::int64_t count_ones(const std::uint8_t* a, std::size_t n);
}  // namespace scalar

#if defined(MALLNAV_HAVE_AVX2)
namespace avx2 {
void color_match(const std::uint8_t* rgb, std::size_t n_pixels, const std::uint8_t ref[3], int tol,
                 std::uint8_t* out);
void squared_distances(double px, double py, const double* xs, const double* ys, std::size_t n, double* out);
std::int64_t and_count(const std::uint8_t* a, const std::uint8_t* b, std::size_t n);
std::int64_t count_ones(const std::uint8_t* a, std::size_t n);
}  // namespace avx2
#endif

#if defined(MALLNAV_HAVE_NEON)
namespace neon {
void color_match(const std::uint8_t* rgb, std::size_t n_pixels, const std::uint8_t ref[3], int tol,
                 std::uint8_t* out);
void squared_distances(double px, double py, const double* xs, const double* ys, std::size_t n, double* out);
std::int64_t and_count(const std::uint8_t* a, const std::uint8_t* b, std::size_t n);
std::int64_t count_ones(const std::uint8_t* a, std::size_t n);
}  // namespace neon
#endif

}  // namespace mallnav::simd

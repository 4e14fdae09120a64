#include <algorithm>
#include <cstdlib>
#include <string>

#include "mallnav/error.hpp"
#include "mallnav/raster.hpp"
#include "mallnav/simd.hpp"

namespace mallnav {

RasterImage::RasterImage(int width, int height, Rgb fill) : width_(width), height_(height) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorKind::invalid_argument, "image dimensions must be positive");
  }
  data_.resize(3 * std::size_t(width) * std::size_t(height));
  for (std::size_t i = 0; i < data_.size(); i += 3) {
    data_[i] = fill.r;
    data_[i + 1] = fill.g;
    data_[i + 2] = fill.b;
  }
}

RasterImage::RasterImage(int width, int height, std::vector<std::uint8_t> interleaved)
    : width_(width), height_(height), data_(std::move(interleaved)) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorKind::invalid_argument, "image dimensions must be positive");
  }
  if (data_.size() != 3 * std::size_t(width) * std::size_t(height)) {
    throw Error(ErrorKind::invalid_argument, "pixel buffer size does not match " + std::to_string(width) + "x" +
                                                 std::to_string(height) + " RGB");
  }
}

bool ColorSpec::matches(Rgb c) const {
  return std::abs(int(c.r) - int(reference.r)) <= tolerance && std::abs(int(c.g) - int(reference.g)) <= tolerance &&
         std::abs(int(c.b) - int(reference.b)) <= tolerance;
}

void ColorSpec::validate() const {
  if (tolerance < 0 || tolerance > 255) {
    throw Error(ErrorKind::invalid_argument, "color tolerance must be in [0, 255], got " + std::to_string(tolerance));
  }
}

BinaryMask::BinaryMask(int width, int height, bool fill)
    : width_(width), height_(height), bits_(std::size_t(std::max(width, 0)) * std::size_t(std::max(height, 0)),
                                            fill ? 1 : 0) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorKind::invalid_argument, "mask dimensions must be positive");
  }
}

std::int64_t BinaryMask::count() const { return simd::count_ones(bits_.data(), bits_.size()); }

namespace {

void require_same_shape(const BinaryMask& a, const BinaryMask& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(ErrorKind::invalid_argument, "mask dimensions differ");
  }
}

template <class Op>
BinaryMask combine(const BinaryMask& a, const BinaryMask& b, Op op) {
  require_same_shape(a, b);
  BinaryMask out(a.width(), a.height());
  auto o = out.bytes();
  auto x = a.bytes();
  auto y = b.bytes();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = op(x[i], y[i]);
  return out;
}

}  // namespace

BinaryMask mask_and(const BinaryMask& a, const BinaryMask& b) {
  return combine(a, b, [](std::uint8_t x, std::uint8_t y) -> std::uint8_t { return x & y; });
}

BinaryMask mask_or(const BinaryMask& a, const BinaryMask& b) {
  return combine(a, b, [](std::uint8_t x, std::uint8_t y) -> std::uint8_t { return x | y; });
}

BinaryMask mask_minus(const BinaryMask& a, const BinaryMask& b) {
  return combine(a, b, [](std::uint8_t x, std::uint8_t y) -> std::uint8_t { return x & (y ^ 1); });
}

BinaryMask segment_by_color(const RasterImage& img, const ColorSpec& spec) {
  spec.validate();
  if (img.empty()) throw Error(ErrorKind::invalid_argument, "segment_by_color: empty image");
  BinaryMask mask(img.width(), img.height());
  const std::uint8_t ref[3] = {spec.reference.r, spec.reference.g, spec.reference.b};
  simd::color_match(img.bytes().data(), std::size_t(img.width()) * img.height(), ref, spec.tolerance,
                    mask.bytes().data());
  return mask;
}

BinaryMask rasterize(const Polygon& poly, int width, int height) {
  BinaryMask mask(width, height);
  rasterize_into(poly, mask);
  return mask;
}

void rasterize_into(const Polygon& poly, BinaryMask& mask) {
  if (poly.vertices.size() < 3) return;
  const BBox b = pixel_bounds(poly);
  const int x0 = std::max(b.x0 - 1, 0);
  const int y0 = std::max(b.y0 - 1, 0);
  const int x1 = std::min(b.x1 + 1, mask.width() - 1);
  const int y1 = std::min(b.y1 + 1, mask.height() - 1);
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      if (contains(poly, {x + 0.5, y + 0.5})) mask.set(x, y, true);
    }
  }
}

}  // namespace mallnav

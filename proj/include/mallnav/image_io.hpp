#pragma once

#include <string>

#include "mallnav/raster.hpp"

namespace mallnav {

/// Reads any 8/16-bit PNG; palette, grey and alpha are converted to plain RGB (alpha ignored).
RasterImage read_png(const std::string& path);
void write_png(const std::string& path, const RasterImage& img);

/// Writes a mask as 8-bit greyscale, 0 or 255.
void write_mask_png(const std::string& path, const BinaryMask& mask);
/// Reads a PNG as a mask: a pixel is set when its first channel exceeds 127.
BinaryMask read_mask_png(const std::string& path);

}  // namespace mallnav

#pragma once

#include <cstdint>
#include <vector>

#include "lipread/image.hpp"

namespace lipread {

// One pixel in CIELAB coordinates (D65 white, 2-degree observer).
struct LabPixel {
  double l = 0.0;
  double a = 0.0;
  double b = 0.0;
};

// A frame converted to CIELAB, same layout as the source raster.
struct LabFrame {
  int width = 0;
  int height = 0;
  std::vector<LabPixel> pixels;

  const LabPixel& at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  LabPixel& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

// sRGB (8-bit) -> CIELAB for a single pixel: gamma expansion, linear
// transform to XYZ (D65), then the CIE L*a*b* mapping.
LabPixel rgb_to_lab(std::uint8_t r, std::uint8_t g, std::uint8_t b);

// Converts every pixel of a raster frame.
LabFrame to_lab(const RasterFrame& frame);

// Inverse mapping, primarily for round-trip checks and debug rendering.
// Out-of-gamut results are clamped to [0, 255].
void lab_to_rgb(const LabPixel& lab, std::uint8_t& r, std::uint8_t& g, std::uint8_t& b);

}  // namespace lipread

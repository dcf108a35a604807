#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace lipread {

struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;
};

// 8-bit sRGB frame, interleaved row-major.
struct RasterFrame {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // 3 * width * height

  static RasterFrame filled(int width, int height, std::uint8_t r, std::uint8_t g,
                            std::uint8_t b);
  void set_pixel(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b);
  const std::uint8_t* pixel(int x, int y) const {
    return rgb.data() + 3 * (static_cast<std::size_t>(y) * width + x);
  }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
};

// Single-channel frame with values nominally in [0, 1].
struct GrayFrame {
  int width = 0;
  int height = 0;
  std::vector<double> pixels;

  double at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  double& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // 0 or 1 per pixel

  bool at(int x, int y) const {
    return data[static_cast<std::size_t>(y) * width + x] != 0;
  }
  void set(int x, int y, bool value) {
    data[static_cast<std::size_t>(y) * width + x] = value ? 1 : 0;
  }
  int count() const;
  static BinaryMask zeros(int width, int height);
};

// Binary PPM (P6) / PGM (P5) with 8-bit samples. PGM loads as a gray
// triplet so the rest of the pipeline sees one frame type.
RasterFrame load_image(const std::filesystem::path& path);
void save_ppm(const std::filesystem::path& path, const RasterFrame& frame);
void save_pgm(const std::filesystem::path& path, const GrayFrame& frame);

GrayFrame to_gray(const RasterFrame& frame);  // Rec.601 luma scaled to [0,1]
RasterFrame crop(const RasterFrame& frame, const Rect& roi);

// Area-average resampling (box filter over exact fractional cell coverage).
GrayFrame resample_area(const GrayFrame& frame, int out_w, int out_h);

}  // namespace lipread

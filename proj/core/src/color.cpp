#include "lipread/color.hpp"

#include <algorithm>
#include <cmath>

namespace lipread {
namespace {

// sRGB -> XYZ linear matrix (IEC 61966-2-1, D65).
constexpr double kM[3][3] = {
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
};

// XYZ -> linear sRGB (inverse of kM, standard published values).
constexpr double kMInv[3][3] = {
    {3.2404542, -1.5371385, -0.4985314},
    {-0.9692660, 1.8760108, 0.0415560},
    {0.0556434, -0.2040259, 1.0572252},
};

// D65 reference white.
constexpr double kWhite[3] = {0.95047, 1.0, 1.08883};

constexpr double kEps = 216.0 / 24389.0;   // (6/29)^3
constexpr double kKappa = 24389.0 / 27.0;  // (29/3)^3

double srgb_expand(double c) {
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double srgb_compress(double c) {
  return c <= 0.0031308 ? 12.92 * c : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

double lab_f(double t) {
  return t > kEps ? std::cbrt(t) : (kKappa * t + 16.0) / 116.0;
}

double lab_f_inv(double t) {
  const double t3 = t * t * t;
  return t3 > kEps ? t3 : (116.0 * t - 16.0) / kKappa;
}

}  // namespace

LabPixel rgb_to_lab(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  const double lin[3] = {srgb_expand(r / 255.0), srgb_expand(g / 255.0), srgb_expand(b / 255.0)};
  double xyz[3] = {0.0, 0.0, 0.0};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) xyz[i] += kM[i][j] * lin[j];
  }
  const double fx = lab_f(xyz[0] / kWhite[0]);
  const double fy = lab_f(xyz[1] / kWhite[1]);
  const double fz = lab_f(xyz[2] / kWhite[2]);
  LabPixel out;
  out.l = 116.0 * fy - 16.0;
  out.a = 500.0 * (fx - fy);
  out.b = 200.0 * (fy - fz);
  return out;
}

LabFrame to_lab(const RasterFrame& frame) {
  LabFrame lab;
  lab.width = frame.width;
  lab.height = frame.height;
  lab.pixels.resize(frame.pixel_count());
  for (std::size_t i = 0; i < frame.pixel_count(); ++i) {
    lab.pixels[i] = rgb_to_lab(frame.rgb[3 * i], frame.rgb[3 * i + 1], frame.rgb[3 * i + 2]);
  }
  return lab;
}

void lab_to_rgb(const LabPixel& lab, std::uint8_t& r, std::uint8_t& g, std::uint8_t& b) {
  const double fy = (lab.l + 16.0) / 116.0;
  const double fx = fy + lab.a / 500.0;
  const double fz = fy - lab.b / 200.0;
  const double xyz[3] = {lab_f_inv(fx) * kWhite[0], lab_f_inv(fy) * kWhite[1],
                         lab_f_inv(fz) * kWhite[2]};
  double lin[3] = {0.0, 0.0, 0.0};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) lin[i] += kMInv[i][j] * xyz[j];
  }
  auto quantize = [](double c) {
    const double s = srgb_compress(std::clamp(c, 0.0, 1.0));
    return static_cast<std::uint8_t>(std::lround(std::clamp(s, 0.0, 1.0) * 255.0));
  };
  r = quantize(lin[0]);
  g = quantize(lin[1]);
  b = quantize(lin[2]);
}

}  // namespace lipread

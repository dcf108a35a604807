#include "lipread/canny.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "lipread/error.hpp"

namespace lipread {
namespace {

// Separable Gaussian blur with replicated borders.
GrayFrame gaussian_blur(const GrayFrame& in, double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-(i * i) / (2.0 * sigma * sigma));
    kernel[static_cast<std::size_t>(i + radius)] = v;
    sum += v;
  }
  for (double& v : kernel) v /= sum;

  auto clamp_x = [&](int x) { return std::clamp(x, 0, in.width - 1); };
  auto clamp_y = [&](int y) { return std::clamp(y, 0, in.height - 1); };

  GrayFrame tmp = in, out = in;
  for (int y = 0; y < in.height; ++y) {
    for (int x = 0; x < in.width; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        acc += kernel[static_cast<std::size_t>(i + radius)] * in.at(clamp_x(x + i), y);
      }
      tmp.at(x, y) = acc;
    }
  }
  for (int y = 0; y < in.height; ++y) {
    for (int x = 0; x < in.width; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        acc += kernel[static_cast<std::size_t>(i + radius)] * tmp.at(x, clamp_y(y + i));
      }
      out.at(x, y) = acc;
    }
  }
  return out;
}

struct GradientField {
  std::vector<double> magnitude;
  std::vector<double> gx;
  std::vector<double> gy;
  int width = 0;
  int height = 0;

  double mag(int x, int y) const { return magnitude[static_cast<std::size_t>(y) * width + x]; }
};

GradientField sobel(const GrayFrame& in) {
  GradientField g;
  g.width = in.width;
  g.height = in.height;
  const std::size_t n = static_cast<std::size_t>(in.width) * in.height;
  g.magnitude.assign(n, 0.0);
  g.gx.assign(n, 0.0);
  g.gy.assign(n, 0.0);

  auto px = [&](int x, int y) {
    return in.at(std::clamp(x, 0, in.width - 1), std::clamp(y, 0, in.height - 1));
  };
  for (int y = 0; y < in.height; ++y) {
    for (int x = 0; x < in.width; ++x) {
      const double gx = (px(x + 1, y - 1) + 2.0 * px(x + 1, y) + px(x + 1, y + 1)) -
                        (px(x - 1, y - 1) + 2.0 * px(x - 1, y) + px(x - 1, y + 1));
      const double gy = (px(x - 1, y + 1) + 2.0 * px(x, y + 1) + px(x + 1, y + 1)) -
                        (px(x - 1, y - 1) + 2.0 * px(x, y - 1) + px(x + 1, y - 1));
      const std::size_t i = static_cast<std::size_t>(y) * in.width + x;
      g.gx[i] = gx;
      g.gy[i] = gy;
      g.magnitude[i] = std::hypot(gx, gy);
    }
  }
  return g;
}

// Non-maximum suppression along the quantized gradient direction.
std::vector<double> suppress_non_maxima(const GradientField& g) {
  std::vector<double> out(g.magnitude.size(), 0.0);
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * g.width + x;
      const double m = g.magnitude[i];
      if (m == 0.0) continue;
      const double angle = std::atan2(g.gy[i], g.gx[i]);
      // Quantize to one of four directions: 0, 45, 90, 135 degrees.
      const double deg = std::fmod(angle * 180.0 / M_PI + 180.0, 180.0);
      int dx = 1, dy = 0;
      if (deg >= 22.5 && deg < 67.5) {
        dx = 1;
        dy = 1;
      } else if (deg >= 67.5 && deg < 112.5) {
        dx = 0;
        dy = 1;
      } else if (deg >= 112.5 && deg < 157.5) {
        dx = -1;
        dy = 1;
      }
      auto mag_at = [&](int xx, int yy) {
        if (xx < 0 || yy < 0 || xx >= g.width || yy >= g.height) return 0.0;
        return g.mag(xx, yy);
      };
      if (m >= mag_at(x + dx, y + dy) && m >= mag_at(x - dx, y - dy)) out[i] = m;
    }
  }
  return out;
}

BinaryMask hysteresis(const std::vector<double>& nms, int width, int height, double high,
                      double low) {
  BinaryMask mask = BinaryMask::zeros(width, height);
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * width + x;
      if (nms[i] >= high && !mask.at(x, y)) {
        mask.set(x, y, 1);
        stack.push_back({x, y});
        while (!stack.empty()) {
          const auto [cx, cy] = stack.back();
          stack.pop_back();
          for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
              const int nx = cx + dx, ny = cy + dy;
              if (nx < 0 || ny < 0 || nx >= width || ny >= height) continue;
              if (mask.at(nx, ny)) continue;
              if (nms[static_cast<std::size_t>(ny) * width + nx] >= low) {
                mask.set(nx, ny, 1);
                stack.push_back({nx, ny});
              }
            }
          }
        }
      }
    }
  }
  return mask;
}

}  // namespace

AdaptiveCannyResult canny_adaptive(const GrayFrame& gray, double t0, int min_pixels,
                                   double factor, int max_lowerings,
                                   const CannyOptions& options) {
  if (t0 <= 0.0) {
    raise(Errc::invalid_argument, "canny_adaptive: initial threshold must be positive");
  }
  if (factor <= 0.0 || factor >= 1.0) {
    raise(Errc::invalid_argument, "canny_adaptive: factor must lie in (0, 1)");
  }
  if (max_lowerings < 0) {
    raise(Errc::invalid_argument, "canny_adaptive: max_lowerings must be >= 0");
  }

  // The expensive stages do not depend on the threshold, so they run once and
  // only hysteresis repeats as the threshold adapts.
  const GrayFrame smoothed = gaussian_blur(gray, options.sigma);
  const GradientField grad = sobel(smoothed);
  const std::vector<double> nms = suppress_non_maxima(grad);

  AdaptiveCannyResult result;
  double high = t0;
  for (int attempt = 0;; ++attempt) {
    result.edges = hysteresis(nms, gray.width, gray.height, high, options.low_high_ratio * high);
    result.edge_count = result.edges.count();
    result.final_threshold = high;
    result.lowerings = attempt;
    result.runs = attempt + 1;
    if (result.edge_count >= min_pixels) {
      result.found = true;
      return result;
    }
    if (attempt == max_lowerings) {
      result.found = false;
      return result;
    }
    high *= factor;
  }
}

}  // namespace lipread

#include "lipread/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>

#include "lipread/error.hpp"

namespace lipread {

RasterFrame RasterFrame::filled(int width, int height, std::uint8_t r, std::uint8_t g,
                                std::uint8_t b) {
  RasterFrame f;
  f.width = width;
  f.height = height;
  f.rgb.resize(3 * f.pixel_count());
  for (std::size_t i = 0; i < f.pixel_count(); ++i) {
    f.rgb[3 * i] = r;
    f.rgb[3 * i + 1] = g;
    f.rgb[3 * i + 2] = b;
  }
  return f;
}

void RasterFrame::set_pixel(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  auto* p = rgb.data() + 3 * (static_cast<std::size_t>(y) * width + x);
  p[0] = r;
  p[1] = g;
  p[2] = b;
}

int BinaryMask::count() const {
  return std::accumulate(data.begin(), data.end(), 0,
                         [](int acc, std::uint8_t v) { return acc + (v ? 1 : 0); });
}

BinaryMask BinaryMask::zeros(int width, int height) {
  BinaryMask m;
  m.width = width;
  m.height = height;
  m.data.assign(static_cast<std::size_t>(width) * height, 0);
  return m;
}

namespace {

// Reads the next netpbm header token, skipping whitespace and # comments.
std::string next_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

}  // namespace

RasterFrame load_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::missing_file, "image file '" + path.string() + "'");

  const std::string magic = next_token(in);
  if (magic != "P5" && magic != "P6") {
    raise(Errc::io_failure, "'" + path.string() + "': unsupported magic '" + magic +
                                "' (want binary P5/P6)");
  }
  const int width = std::stoi(next_token(in));
  const int height = std::stoi(next_token(in));
  const int maxval = std::stoi(next_token(in));
  if (width < 1 || height < 1) {
    raise(Errc::io_failure, "'" + path.string() + "': bad dimensions");
  }
  if (maxval != 255) {
    raise(Errc::io_failure, "'" + path.string() + "': only 8-bit samples supported");
  }

  RasterFrame f;
  f.width = width;
  f.height = height;
  f.rgb.resize(3 * f.pixel_count());
  if (magic == "P6") {
    in.read(reinterpret_cast<char*>(f.rgb.data()), static_cast<std::streamsize>(f.rgb.size()));
    if (in.gcount() != static_cast<std::streamsize>(f.rgb.size())) {
      raise(Errc::io_failure, "'" + path.string() + "': truncated pixel data");
    }
  } else {
    std::vector<std::uint8_t> gray(f.pixel_count());
    in.read(reinterpret_cast<char*>(gray.data()), static_cast<std::streamsize>(gray.size()));
    if (in.gcount() != static_cast<std::streamsize>(gray.size())) {
      raise(Errc::io_failure, "'" + path.string() + "': truncated pixel data");
    }
    for (std::size_t i = 0; i < gray.size(); ++i) {
      f.rgb[3 * i] = f.rgb[3 * i + 1] = f.rgb[3 * i + 2] = gray[i];
    }
  }
  return f;
}

void save_ppm(const std::filesystem::path& path, const RasterFrame& frame) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(Errc::io_failure, "cannot write '" + path.string() + "'");
  out << "P6\n" << frame.width << " " << frame.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(frame.rgb.data()),
            static_cast<std::streamsize>(frame.rgb.size()));
}

void save_pgm(const std::filesystem::path& path, const GrayFrame& frame) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(Errc::io_failure, "cannot write '" + path.string() + "'");
  out << "P5\n" << frame.width << " " << frame.height << "\n255\n";
  for (double v : frame.pixels) {
    const int q = static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
    out.put(static_cast<char>(q));
  }
}

GrayFrame to_gray(const RasterFrame& frame) {
  GrayFrame g;
  g.width = frame.width;
  g.height = frame.height;
  g.pixels.resize(frame.pixel_count());
  for (std::size_t i = 0; i < frame.pixel_count(); ++i) {
    const double r = frame.rgb[3 * i], gg = frame.rgb[3 * i + 1], b = frame.rgb[3 * i + 2];
    g.pixels[i] = (0.299 * r + 0.587 * gg + 0.114 * b) / 255.0;
  }
  return g;
}

RasterFrame crop(const RasterFrame& frame, const Rect& roi) {
  if (roi.w < 1 || roi.h < 1 || roi.x < 0 || roi.y < 0 || roi.x + roi.w > frame.width ||
      roi.y + roi.h > frame.height) {
    raise(Errc::invalid_argument,
          "crop rectangle [" + std::to_string(roi.x) + "," + std::to_string(roi.y) + " " +
              std::to_string(roi.w) + "x" + std::to_string(roi.h) + "] outside frame " +
              std::to_string(frame.width) + "x" + std::to_string(frame.height));
  }
  RasterFrame out;
  out.width = roi.w;
  out.height = roi.h;
  out.rgb.resize(3 * out.pixel_count());
  for (int y = 0; y < roi.h; ++y) {
    const auto* src = frame.pixel(roi.x, roi.y + y);
    std::copy(src, src + 3 * roi.w, out.rgb.data() + 3 * static_cast<std::size_t>(y) * roi.w);
  }
  return out;
}

GrayFrame resample_area(const GrayFrame& frame, int out_w, int out_h) {
  if (out_w < 1 || out_h < 1) {
    raise(Errc::invalid_argument, "resample target must be at least 1x1");
  }
  GrayFrame out;
  out.width = out_w;
  out.height = out_h;
  out.pixels.assign(static_cast<std::size_t>(out_w) * out_h, 0.0);

  // Exact fractional coverage of each source pixel by each output cell,
  // separable along x and y.
  auto axis_weights = [](int in_n, int out_n) {
    // For output cell j: [j*in/out, (j+1)*in/out) overlap per source index.
    std::vector<std::vector<std::pair<int, double>>> w(static_cast<std::size_t>(out_n));
    const double scale = static_cast<double>(in_n) / out_n;
    for (int j = 0; j < out_n; ++j) {
      const double lo = j * scale, hi = (j + 1) * scale;
      for (int i = static_cast<int>(std::floor(lo)); i < in_n && i < hi; ++i) {
        const double cover = std::min<double>(i + 1, hi) - std::max<double>(i, lo);
        if (cover > 0) w[static_cast<std::size_t>(j)].push_back({i, cover});
      }
    }
    return w;
  };
  const auto wx = axis_weights(frame.width, out_w);
  const auto wy = axis_weights(frame.height, out_h);
  const double cell_area = (static_cast<double>(frame.width) / out_w) *
                           (static_cast<double>(frame.height) / out_h);

  for (int oy = 0; oy < out_h; ++oy) {
    for (int ox = 0; ox < out_w; ++ox) {
      double acc = 0.0;
      for (const auto& [sy, cy] : wy[static_cast<std::size_t>(oy)]) {
        for (const auto& [sx, cx] : wx[static_cast<std::size_t>(ox)]) {
          acc += cy * cx * frame.at(sx, sy);
        }
      }
      out.at(ox, oy) = acc / cell_area;
    }
  }
  return out;
}

}  // namespace lipread

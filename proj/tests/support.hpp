// Shared fixtures for the test binaries: a brute-force forward-probability
// oracle, synthetic image scenes with known ground truth, and a scratch
// directory that cleans up after itself.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lipread/error.hpp"
#include "lipread/hmm.hpp"
#include "lipread/image.hpp"
#include "lipread/rng.hpp"

namespace testsupport {

// Log P(seq | h) by summing the probability of every state path explicitly.
// Exponential in T; only usable for tiny models, which is the point: it
// shares no code with the scaled forward recursion under test.
inline double brute_force_log_likelihood(const lipread::Hmm& h, const std::vector<int>& seq) {
  const int q = h.n_states;
  const int t_len = static_cast<int>(seq.size());
  std::vector<int> path(static_cast<std::size_t>(t_len), 0);
  double total = 0.0;
  while (true) {
    double p = h.initial(path[0]) * h.emission(path[0], seq[0] - 1);
    for (int t = 1; t < t_len; ++t) {
      p *= h.transition(path[t - 1], path[t]) * h.emission(path[t], seq[t] - 1);
    }
    total += p;

    int pos = t_len - 1;
    while (pos >= 0 && path[pos] == q - 1) path[pos--] = 0;
    if (pos < 0) break;
    ++path[pos];
  }
  return total > 0.0 ? std::log(total) : -std::numeric_limits<double>::infinity();
}

// Runs fn() and reports the lipread error code it threw, if any.
template <typename Fn>
std::optional<lipread::Errc> catch_code(Fn&& fn) {
  try {
    std::forward<Fn>(fn)();
  } catch (const lipread::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

// Scratch directory under the system temp root, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::string pattern =
        (std::filesystem::temp_directory_path() / "lipread_test_XXXXXX").string();
    if (::mkdtemp(pattern.data()) == nullptr) {
      throw std::runtime_error("mkdtemp failed for " + pattern);
    }
    path_ = pattern;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// A mouth-region scene with three chroma groups: skin background, a red lip
// ring, and a dark bluish mouth interior. Ground truth marks the lip ring.
struct LipsScene {
  lipread::RasterFrame frame;
  lipread::BinaryMask lips;
};

inline LipsScene make_lips_scene(int width, int height, std::uint64_t seed) {
  lipread::Rng rng(seed);
  LipsScene scene;
  scene.frame = lipread::RasterFrame::filled(width, height, 0, 0, 0);
  scene.lips = lipread::BinaryMask::zeros(width, height);

  const double cx = width / 2.0, cy = height / 2.0;
  const double outer_a = width * 0.30, outer_b = height * 0.24;
  const double inner_a = width * 0.16, inner_b = height * 0.10;

  auto jitter = [&](int base) {
    const int v = base + rng.next_int(7) - 3;
    return static_cast<std::uint8_t>(std::clamp(v, 0, 255));
  };
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double dx = x + 0.5 - cx, dy = y + 0.5 - cy;
      const double outer = dx * dx / (outer_a * outer_a) + dy * dy / (outer_b * outer_b);
      const double inner = dx * dx / (inner_a * inner_a) + dy * dy / (inner_b * inner_b);
      if (inner <= 1.0) {
        scene.frame.set_pixel(x, y, jitter(60), jitter(60), jitter(95));  // mouth interior
      } else if (outer <= 1.0) {
        scene.frame.set_pixel(x, y, jitter(180), jitter(60), jitter(70));  // lips
        scene.lips.set(x, y, true);
      } else {
        scene.frame.set_pixel(x, y, jitter(224), jitter(172), jitter(140));  // skin
      }
    }
  }
  return scene;
}

inline double jaccard(const lipread::BinaryMask& a, const lipread::BinaryMask& b) {
  int inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const bool pa = a.data[i] != 0, pb = b.data[i] != 0;
    inter += (pa && pb) ? 1 : 0;
    uni += (pa || pb) ? 1 : 0;
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / uni;
}

// Gray frame holding a filled rectangle of the given contrast over a zero
// background, plus the rectangle's perimeter mask (the ideal edge locus).
struct RectScene {
  lipread::GrayFrame gray;
  lipread::BinaryMask perimeter;
  lipread::Rect rect;
};

inline RectScene make_rect_scene(int width, int height, double contrast) {
  RectScene scene;
  scene.gray.width = width;
  scene.gray.height = height;
  scene.gray.pixels.assign(static_cast<std::size_t>(width) * height, 0.0);
  scene.perimeter = lipread::BinaryMask::zeros(width, height);
  scene.rect = {width / 4, height / 4, width / 2, height / 2};

  for (int y = scene.rect.y; y < scene.rect.y + scene.rect.h; ++y) {
    for (int x = scene.rect.x; x < scene.rect.x + scene.rect.w; ++x) {
      scene.gray.at(x, y) = contrast;
      const bool edge = x == scene.rect.x || x == scene.rect.x + scene.rect.w - 1 ||
                        y == scene.rect.y || y == scene.rect.y + scene.rect.h - 1;
      if (edge) scene.perimeter.set(x, y, true);
    }
  }
  return scene;
}

// Fraction of reference pixels that have a detected pixel within `radius`
// (Chebyshev distance). Used in both directions for perimeter coverage.
inline double coverage_within(const lipread::BinaryMask& reference,
                              const lipread::BinaryMask& detected, int radius) {
  int total = 0, covered = 0;
  for (int y = 0; y < reference.height; ++y) {
    for (int x = 0; x < reference.width; ++x) {
      if (!reference.at(x, y)) continue;
      ++total;
      bool hit = false;
      for (int dy = -radius; dy <= radius && !hit; ++dy) {
        for (int dx = -radius; dx <= radius && !hit; ++dx) {
          const int nx = x + dx, ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= detected.width || ny >= detected.height) continue;
          hit = detected.at(nx, ny);
        }
      }
      covered += hit ? 1 : 0;
    }
  }
  return total == 0 ? 1.0 : static_cast<double>(covered) / total;
}

// Clip with a static gradient background and a small bright blob marching
// left to right; `true_background` is the gradient alone.
struct BlobClip {
  std::vector<lipread::RasterFrame> frames;
  std::vector<lipread::GrayFrame> true_background;
};

inline BlobClip make_blob_clip(int width, int height, int n_frames) {
  BlobClip clip;
  lipread::GrayFrame bg;
  bg.width = width;
  bg.height = height;
  bg.pixels.assign(static_cast<std::size_t>(width) * height, 0.0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      bg.at(x, y) = 0.3 + 0.4 * static_cast<double>(x + y) / (width + height - 2);
    }
  }

  for (int t = 0; t < n_frames; ++t) {
    lipread::GrayFrame g = bg;
    const int cx = 3 + t * (width - 9) / (n_frames - 1);
    for (int y = 14; y < 17 && y < height; ++y) {
      for (int x = cx; x < cx + 3 && x < width; ++x) {
        g.at(x, y) = std::min(1.0, g.at(x, y) + 0.3);
      }
    }
    lipread::RasterFrame f = lipread::RasterFrame::filled(width, height, 0, 0, 0);
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        const auto v = static_cast<std::uint8_t>(std::lround(g.at(x, y) * 255.0));
        f.set_pixel(x, y, v, v, v);
      }
    }
    clip.frames.push_back(std::move(f));
    clip.true_background.push_back(bg);
  }
  return clip;
}

}  // namespace testsupport

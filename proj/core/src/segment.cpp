#include "lipread/segment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "lipread/error.hpp"
#include "lipread/rng.hpp"

namespace lipread {
namespace {

double sq_dist(const std::array<double, 2>& p, const std::array<double, 2>& q) {
  const double da = p[0] - q[0], db = p[1] - q[1];
  return da * da + db * db;
}

}  // namespace

AbClustering kmeans_ab(const LabFrame& frame, int k, std::uint64_t seed) {
  if (k < 2 || k > 4) {
    raise(Errc::invalid_argument, "kmeans_ab: k must be in 2..4, got " + std::to_string(k));
  }
  const std::size_t n = frame.pixels.size();
  if (n < static_cast<std::size_t>(k)) {
    raise(Errc::degenerate_input, "kmeans_ab: " + std::to_string(n) + " pixels < k=" +
                                      std::to_string(k));
  }

  std::vector<std::array<double, 2>> pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = {frame.pixels[i].a, frame.pixels[i].b};

  AbClustering out;
  out.width = frame.width;
  out.height = frame.height;
  out.k = k;
  out.assignments.assign(n, 0);
  out.centroids.assign(static_cast<std::size_t>(k), {0.0, 0.0});

  // Chroma values come from 8-bit inputs, so exact duplicates are common;
  // count the distinct points to detect frames that cannot support k clusters.
  std::set<std::array<double, 2>> distinct(pts.begin(), pts.end());
  if (distinct.size() < static_cast<std::size_t>(k)) {
    out.degenerate = true;
    std::size_t c = 0;
    for (const auto& p : distinct) out.centroids[c++] = p;
    for (; c < static_cast<std::size_t>(k); ++c) out.centroids[c] = out.centroids[0];
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (int j = 0; j < k; ++j) {
        const double d = sq_dist(pts[i], out.centroids[static_cast<std::size_t>(j)]);
        if (d < best) {
          best = d;
          out.assignments[i] = j;
        }
      }
    }
    out.inertia_history.push_back(0.0);
    return out;
  }

  Rng rng(seed);

  // k-means++ seeding: first centroid uniform, the rest D^2-weighted.
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  out.centroids[0] = pts[static_cast<std::size_t>(rng.next_int(static_cast<int>(n)))];
  for (int c = 1; c < k; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], sq_dist(pts[i], out.centroids[static_cast<std::size_t>(c - 1)]));
    }
    out.centroids[static_cast<std::size_t>(c)] = pts[static_cast<std::size_t>(rng.discrete(d2))];
  }

  constexpr int kMaxIters = 100;
  constexpr double kMoveTol = 1e-6;
  for (int iter = 0; iter < kMaxIters; ++iter) {
    // Assignment pass; inertia is recorded here so the history reflects the
    // value the update step is about to improve on.
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      int arg = 0;
      for (int j = 0; j < k; ++j) {
        const double d = sq_dist(pts[i], out.centroids[static_cast<std::size_t>(j)]);
        if (d < best) {
          best = d;
          arg = j;
        }
      }
      out.assignments[i] = arg;
      inertia += best;
    }
    out.inertia_history.push_back(inertia);
    out.iterations = iter + 1;

    // Update pass: empty clusters keep their previous centroid, which leaves
    // the objective unchanged and preserves monotonicity.
    std::vector<std::array<double, 2>> sums(static_cast<std::size_t>(k), {0.0, 0.0});
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto j = static_cast<std::size_t>(out.assignments[i]);
      sums[j][0] += pts[i][0];
      sums[j][1] += pts[i][1];
      ++counts[j];
    }
    double max_move = 0.0;
    for (std::size_t j = 0; j < static_cast<std::size_t>(k); ++j) {
      if (counts[j] == 0) continue;
      const std::array<double, 2> next = {sums[j][0] / counts[j], sums[j][1] / counts[j]};
      max_move = std::max(max_move, std::sqrt(sq_dist(next, out.centroids[j])));
      out.centroids[j] = next;
    }
    if (max_move < kMoveTol) break;
  }
  return out;
}

LipMask select_lip_cluster(const AbClustering& clustering) {
  if (clustering.k < 2) {
    raise(Errc::invalid_argument, "select_lip_cluster: need at least 2 clusters");
  }
  int best = 0;
  for (int j = 1; j < clustering.k; ++j) {
    const auto& cj = clustering.centroids[static_cast<std::size_t>(j)];
    const auto& cb = clustering.centroids[static_cast<std::size_t>(best)];
    if (cj[0] > cb[0] || (cj[0] == cb[0] && cj[1] < cb[1])) best = j;
  }
  LipMask mask = BinaryMask::zeros(clustering.width, clustering.height);
  for (std::size_t i = 0; i < clustering.assignments.size(); ++i) {
    mask.data[i] = clustering.assignments[i] == best ? 1 : 0;
  }
  return mask;
}

std::vector<double> mask_to_feature(const BinaryMask& mask, int grid_w, int grid_h,
                                    bool* was_empty) {
  if (grid_w < 1 || grid_h < 1) {
    raise(Errc::invalid_argument, "mask_to_feature: grid dimensions must be >= 1");
  }
  if (was_empty) *was_empty = false;

  int min_x = mask.width, min_y = mask.height, max_x = -1, max_y = -1;
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.at(x, y)) continue;
      min_x = std::min(min_x, x);
      min_y = std::min(min_y, y);
      max_x = std::max(max_x, x);
      max_y = std::max(max_y, y);
    }
  }
  if (max_x < 0) {
    if (was_empty) *was_empty = true;
    return std::vector<double>(static_cast<std::size_t>(grid_w) * grid_h, 0.0);
  }

  GrayFrame box;
  box.width = max_x - min_x + 1;
  box.height = max_y - min_y + 1;
  box.pixels.resize(static_cast<std::size_t>(box.width) * box.height);
  for (int y = 0; y < box.height; ++y) {
    for (int x = 0; x < box.width; ++x) {
      box.at(x, y) = mask.at(min_x + x, min_y + y) ? 1.0 : 0.0;
    }
  }
  const GrayFrame pooled = resample_area(box, grid_w, grid_h);
  return pooled.pixels;
}

}  // namespace lipread

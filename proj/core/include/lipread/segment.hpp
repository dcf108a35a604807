#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "lipread/color.hpp"
#include "lipread/image.hpp"

namespace lipread {

// Result of k-means over the (a, b) chroma plane of a LabFrame.
struct AbClustering {
  int width = 0;
  int height = 0;
  int k = 0;
  std::vector<int> assignments;                   // pixel index -> cluster in [0, k)
  std::vector<std::array<double, 2>> centroids;   // per-cluster (a, b)
  std::vector<double> inertia_history;            // inertia after each assignment pass
  int iterations = 0;
  bool degenerate = false;  // fewer distinct (a, b) points than k
};

using LipMask = BinaryMask;

// Seeded k-means++ plus Lloyd iterations on the (a, b) values of a frame.
// Stops when every centroid moves less than 1e-6 or after 100 iterations.
// When the frame has fewer distinct chroma points than k, the clustering is
// returned with duplicated centroids and `degenerate` set instead of failing.
AbClustering kmeans_ab(const LabFrame& frame, int k, std::uint64_t seed);

// Picks the cluster with the highest centroid a value (ties: lowest b) and
// returns the binary mask of its pixels.
LipMask select_lip_cluster(const AbClustering& clustering);

// Crops the mask to its bounding box and pools it onto a grid_w x grid_h
// grid; each cell holds the covered-area fraction in [0, 1], flattened
// row-major. An empty mask yields a zero vector; `was_empty`, when given,
// reports that condition so callers can log it.
std::vector<double> mask_to_feature(const BinaryMask& mask, int grid_w, int grid_h,
                                    bool* was_empty = nullptr);

}  // namespace lipread

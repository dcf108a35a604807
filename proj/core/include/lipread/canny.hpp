#pragma once

#include "lipread/image.hpp"

namespace lipread {

// Fixed internals of the Canny chain; defaults documented in the README.
struct CannyOptions {
  double sigma = 1.4;          // Gaussian smoothing
  double low_high_ratio = 0.4; // hysteresis low = ratio * high
};

struct AdaptiveCannyResult {
  BinaryMask edges;
  int lowerings = 0;            // threshold reductions applied
  int runs = 0;                 // hysteresis passes executed (lowerings + 1)
  double final_threshold = 0.0; // high threshold of the returned mask
  int edge_count = 0;
  bool found = false;           // edge_count >= min_pixels
};

// Canny edge detection with an adaptive high threshold: smooth, take Sobel
// gradients, suppress non-maxima, then apply hysteresis at the current high
// threshold. While fewer than min_pixels edge pixels are found and fewer than
// max_lowerings reductions have been used, the high threshold is multiplied
// by factor and hysteresis re-runs on the cached gradient field. When the
// budget is exhausted the last mask is returned with `found` cleared.
AdaptiveCannyResult canny_adaptive(const GrayFrame& gray, double t0, int min_pixels,
                                   double factor, int max_lowerings,
                                   const CannyOptions& options = {});

}  // namespace lipread

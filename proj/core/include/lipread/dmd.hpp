#pragma once

#include <complex>
#include <vector>

#include "lipread/image.hpp"

namespace lipread {

// Background/foreground split of a short clip via exact dynamic mode
// decomposition of the flattened grayscale snapshots.
struct DmdSeparation {
  std::vector<GrayFrame> background;
  std::vector<GrayFrame> foreground;  // input - background, clamped to >= 0
  std::vector<std::complex<double>> eigenvalues;
  std::vector<double> omega_magnitudes;  // |log lambda| per retained mode
  int rank_used = 0;
  int background_modes = 0;
};

// Exact DMD with rank-truncated SVD; modes whose continuous-time frequency
// magnitude |omega| = |log lambda| (frame-indexed time, dt = 1) falls below
// omega_tol form the background reconstruction. Requires >= 3 frames of
// identical dimensions and rank <= frames - 1.
DmdSeparation dmd_separate(const std::vector<RasterFrame>& frames, int rank,
                           double omega_tol = 1e-2);

}  // namespace lipread

#include "lipread/dmd.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "lipread/error.hpp"

namespace lipread {

DmdSeparation dmd_separate(const std::vector<RasterFrame>& frames, int rank, double omega_tol) {
  const int m = static_cast<int>(frames.size());
  if (m < 3) {
    raise(Errc::degenerate_input,
          "dmd_separate: need at least 3 frames, got " + std::to_string(m));
  }
  if (rank < 1 || rank > m - 1) {
    raise(Errc::rank_too_large, "dmd_separate: rank " + std::to_string(rank) +
                                    " not in 1.." + std::to_string(m - 1));
  }
  const int width = frames[0].width, height = frames[0].height;
  for (const auto& f : frames) {
    if (f.width != width || f.height != height) {
      raise(Errc::dimension_mismatch, "dmd_separate: frames differ in size (" +
                                          std::to_string(width) + "x" + std::to_string(height) +
                                          " vs " + std::to_string(f.width) + "x" +
                                          std::to_string(f.height) + ")");
    }
  }

  const Eigen::Index d = static_cast<Eigen::Index>(width) * height;
  Eigen::MatrixXd snapshots(d, m);
  for (int t = 0; t < m; ++t) {
    const GrayFrame g = to_gray(frames[static_cast<std::size_t>(t)]);
    snapshots.col(t) = Eigen::Map<const Eigen::VectorXd>(g.pixels.data(), d);
  }
  const Eigen::MatrixXd x1 = snapshots.leftCols(m - 1);
  const Eigen::MatrixXd x2 = snapshots.rightCols(m - 1);

  Eigen::BDCSVD<Eigen::MatrixXd> svd(x1, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  // Numerically zero singular values would blow up the pseudo-inverse, so the
  // requested rank is capped at the effective rank of X1.
  int effective = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > sigma(0) * 1e-12) ++effective;
  }
  const int r = std::min(rank, effective);
  if (r < 1) {
    raise(Errc::degenerate_input, "dmd_separate: snapshot matrix is numerically zero");
  }

  const Eigen::MatrixXd u = svd.matrixU().leftCols(r);
  const Eigen::MatrixXd v = svd.matrixV().leftCols(r);
  const Eigen::VectorXd sig_inv = sigma.head(r).cwiseInverse();
  const Eigen::MatrixXd atilde = u.transpose() * x2 * v * sig_inv.asDiagonal();

  Eigen::EigenSolver<Eigen::MatrixXd> eig(atilde);
  if (eig.info() != Eigen::Success) {
    raise(Errc::numerical_failure, "dmd_separate: eigendecomposition did not converge");
  }
  const Eigen::VectorXcd lambda = eig.eigenvalues();
  const Eigen::MatrixXcd w = eig.eigenvectors();

  // Exact DMD modes and their continuous-time frequencies.
  const Eigen::MatrixXcd phi = x2 * v * sig_inv.asDiagonal() * w;

  DmdSeparation out;
  out.rank_used = r;
  out.eigenvalues.resize(static_cast<std::size_t>(r));
  out.omega_magnitudes.resize(static_cast<std::size_t>(r));
  std::vector<bool> is_background(static_cast<std::size_t>(r), false);
  for (int i = 0; i < r; ++i) {
    const std::complex<double> l = lambda(i);
    out.eigenvalues[static_cast<std::size_t>(i)] = l;
    const double omega = std::abs(std::log(l));
    out.omega_magnitudes[static_cast<std::size_t>(i)] = omega;
    if (omega < omega_tol) {
      is_background[static_cast<std::size_t>(i)] = true;
      ++out.background_modes;
    }
  }

  // Mode amplitudes from the first snapshot: b = pinv(Phi) x0.
  const Eigen::VectorXcd b =
      phi.completeOrthogonalDecomposition().solve(snapshots.col(0).cast<std::complex<double>>());

  out.background.resize(static_cast<std::size_t>(m));
  out.foreground.resize(static_cast<std::size_t>(m));
  for (int t = 0; t < m; ++t) {
    Eigen::VectorXcd bg = Eigen::VectorXcd::Zero(d);
    for (int i = 0; i < r; ++i) {
      if (!is_background[static_cast<std::size_t>(i)]) continue;
      bg += phi.col(i) * (b(i) * std::pow(lambda(i), t));
    }
    GrayFrame& bgf = out.background[static_cast<std::size_t>(t)];
    GrayFrame& fgf = out.foreground[static_cast<std::size_t>(t)];
    bgf.width = fgf.width = width;
    bgf.height = fgf.height = height;
    bgf.pixels.resize(static_cast<std::size_t>(d));
    fgf.pixels.resize(static_cast<std::size_t>(d));
    for (Eigen::Index i = 0; i < d; ++i) {
      const double bg_val = bg(i).real();
      bgf.pixels[static_cast<std::size_t>(i)] = bg_val;
      fgf.pixels[static_cast<std::size_t>(i)] = std::max(0.0, snapshots(i, t) - bg_val);
    }
  }
  return out;
}

}  // namespace lipread

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace lipread {

// Identifies the provenance of one data-matrix column.
struct FrameRef {
  std::string video_id;
  int frame = 0;  // 1-based frame index within the video
};

// Frame features as a D x N matrix; each column is one frame.
struct FeatureMatrix {
  Eigen::MatrixXd values;
  std::vector<FrameRef> column_ids;  // size N; may be empty for synthetic data

  Eigen::Index dim() const { return values.rows(); }
  Eigen::Index count() const { return values.cols(); }
};

// Per-column symbol labels drawn from 1..alphabet_size.
struct LabelVector {
  std::vector<int> labels;
  int alphabet_size = 0;
};

// Truncated left factor of the data-matrix SVD, reused to project new frames.
struct SvdProjection {
  Eigen::MatrixXd left;      // D x r, orthonormal columns
  Eigen::VectorXd singular;  // r strictly positive values, non-increasing
  int rank = 0;
  bool centered = false;
  Eigen::VectorXd mean;  // column mean (size D) when centered, empty otherwise
};

struct SvdFit {
  SvdProjection projection;
  Eigen::MatrixXd coords;  // N x r; row i is the reduced coordinate of column i
};

// Truncated SVD of the data matrix. The requested rank is capped at the
// effective numerical rank so stored singular values stay strictly positive.
// Optional centering subtracts the column mean first.
SvdFit fit_svd(const FeatureMatrix& x, int rank, bool center = false);

// Maps a raw feature vector into the reduced space: S_r^-1 U_r^T (x - mean).
// Projecting a training column reproduces its coordinate row.
Eigen::VectorXd project(const SvdProjection& p, const Eigen::VectorXd& x);

// Deterministic random train/test split; train size = round(fraction * n),
// both halves sorted ascending.
struct Split {
  std::vector<int> train;
  std::vector<int> test;
};
Split split_indices(int n, double train_fraction, std::uint64_t seed);

// Gaussian naive Bayes over reduced coordinates. Only classes observed in
// training can be predicted; passing alphabet_size > 0 additionally demands
// that every class 1..alphabet_size has at least one sample.
struct GaussianNb {
  std::vector<int> classes;   // sorted distinct labels
  Eigen::VectorXd log_priors; // per class
  Eigen::MatrixXd means;      // C x r
  Eigen::MatrixXd variances;  // C x r, floored
  double variance_floor = 0.0;

  static GaussianNb fit(const Eigen::MatrixXd& coords, const std::vector<int>& labels,
                        int alphabet_size = 0);
  int predict(const Eigen::VectorXd& coord) const;
};

// k-nearest neighbors with fixed deterministic tie rules: distance ties keep
// the lower training index, vote ties pick the lower label.
struct Knn {
  Eigen::MatrixXd coords;  // N x r
  std::vector<int> labels;
  int k = 1;

  static Knn fit(const Eigen::MatrixXd& coords, const std::vector<int>& labels, int k);
  int predict(const Eigen::VectorXd& coord) const;
};

// Fraction of test-split items whose prediction matches the true label.
double evaluate_classifier(const std::function<int(const Eigen::VectorXd&)>& predict,
                           const Eigen::MatrixXd& coords, const std::vector<int>& labels,
                           const Split& split);

// A trained frame classifier: projection plus one of the two model kinds.
struct FrameClassifier {
  SvdProjection projection;
  std::variant<Knn, GaussianNb> model;
  std::string mode;  // "phoneme" or "viseme"
  int alphabet_size = 0;

  int predict(const Eigen::VectorXd& feature) const;
};

void save_classifier(const std::filesystem::path& path, const FrameClassifier& classifier);
FrameClassifier load_classifier(const std::filesystem::path& path);

}  // namespace lipread

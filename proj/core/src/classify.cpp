#include "lipread/classify.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include <json.hpp>

#include "eigen_json.hpp"
#include "lipread/error.hpp"
#include "lipread/rng.hpp"

namespace lipread {

SvdFit fit_svd(const FeatureMatrix& x, int rank, bool center) {
  const Eigen::Index d = x.dim(), n = x.count();
  if (n < 1) raise(Errc::empty_data, "fit_svd: data matrix has no columns");
  if (!x.values.allFinite()) raise(Errc::invalid_argument, "fit_svd: non-finite feature values");
  if (rank < 1 || rank > std::min(d, n)) {
    raise(Errc::rank_too_large, "fit_svd: rank " + std::to_string(rank) + " not in 1..min(" +
                                    std::to_string(d) + "," + std::to_string(n) + ")");
  }

  Eigen::MatrixXd work = x.values;
  Eigen::VectorXd mean;
  if (center) {
    mean = work.rowwise().mean();
    work.colwise() -= mean;
  }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(work, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    raise(Errc::numerical_failure, "fit_svd: SVD did not converge");
  }
  const Eigen::VectorXd& sigma = svd.singularValues();

  // Keep only strictly positive directions so the inverse scaling in
  // project() is always defined.
  int effective = 0;
  const double tol = sigma.size() > 0 ? sigma(0) * 1e-12 : 0.0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > tol) ++effective;
  }
  const int r = std::min(rank, effective);
  if (r < 1) raise(Errc::degenerate_input, "fit_svd: data matrix is numerically zero");

  SvdFit fit;
  fit.projection.left = svd.matrixU().leftCols(r);
  fit.projection.singular = sigma.head(r);
  fit.projection.rank = r;
  fit.projection.centered = center;
  if (center) fit.projection.mean = mean;
  fit.coords = svd.matrixV().leftCols(r);
  return fit;
}

Eigen::VectorXd project(const SvdProjection& p, const Eigen::VectorXd& x) {
  if (x.size() != p.left.rows()) {
    raise(Errc::dimension_mismatch, "project: vector has dimension " + std::to_string(x.size()) +
                                        ", projection expects " + std::to_string(p.left.rows()));
  }
  Eigen::VectorXd v = x;
  if (p.centered) v -= p.mean;
  return p.singular.cwiseInverse().asDiagonal() * (p.left.transpose() * v);
}

Split split_indices(int n, double train_fraction, std::uint64_t seed) {
  if (n < 1) raise(Errc::invalid_argument, "split_indices: n must be >= 1");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    raise(Errc::invalid_argument, "split_indices: train fraction must lie in (0, 1)");
  }
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);

  const auto train_size =
      static_cast<std::size_t>(std::floor(train_fraction * n + 0.5));
  Split s;
  s.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(train_size));
  s.test.assign(order.begin() + static_cast<std::ptrdiff_t>(train_size), order.end());
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

GaussianNb GaussianNb::fit(const Eigen::MatrixXd& coords, const std::vector<int>& labels,
                           int alphabet_size) {
  const auto n = static_cast<std::size_t>(coords.rows());
  if (n == 0 || labels.size() != n) {
    raise(Errc::empty_data, "GaussianNb::fit: need one label per coordinate row");
  }

  std::set<int> present(labels.begin(), labels.end());
  if (alphabet_size > 0) {
    for (int c = 1; c <= alphabet_size; ++c) {
      if (!present.count(c)) {
        raise(Errc::empty_class,
              "GaussianNb::fit: class " + std::to_string(c) + " has no training samples");
      }
    }
  }

  GaussianNb model;
  model.classes.assign(present.begin(), present.end());
  const auto c_count = static_cast<Eigen::Index>(model.classes.size());
  const Eigen::Index r = coords.cols();
  model.log_priors.resize(c_count);
  model.means = Eigen::MatrixXd::Zero(c_count, r);
  model.variances = Eigen::MatrixXd::Zero(c_count, r);

  std::map<int, Eigen::Index> class_row;
  for (Eigen::Index c = 0; c < c_count; ++c) {
    class_row[model.classes[static_cast<std::size_t>(c)]] = c;
  }

  Eigen::VectorXd counts = Eigen::VectorXd::Zero(c_count);
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Index c = class_row.at(labels[i]);
    counts(c) += 1.0;
    model.means.row(c) += coords.row(static_cast<Eigen::Index>(i));
  }
  for (Eigen::Index c = 0; c < c_count; ++c) model.means.row(c) /= counts(c);
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Index c = class_row.at(labels[i]);
    const Eigen::RowVectorXd diff =
        coords.row(static_cast<Eigen::Index>(i)) - model.means.row(c);
    model.variances.row(c) += diff.cwiseProduct(diff);
  }
  for (Eigen::Index c = 0; c < c_count; ++c) model.variances.row(c) /= counts(c);

  // Floor relative to the overall spread; mask-grid features routinely have
  // constant dimensions whose variance would otherwise be exactly zero.
  const Eigen::RowVectorXd global_mean = coords.colwise().mean();
  const double global_var =
      (coords.rowwise() - global_mean).array().square().mean();
  model.variance_floor = global_var > 0.0 ? 1e-9 * global_var : 1e-12;
  model.variances = model.variances.cwiseMax(model.variance_floor);

  for (Eigen::Index c = 0; c < c_count; ++c) {
    model.log_priors(c) = std::log(counts(c) / static_cast<double>(n));
  }
  return model;
}

int GaussianNb::predict(const Eigen::VectorXd& coord) const {
  if (coord.size() != means.cols()) {
    raise(Errc::dimension_mismatch, "GaussianNb::predict: coordinate has dimension " +
                                        std::to_string(coord.size()) + ", model expects " +
                                        std::to_string(means.cols()));
  }
  double best_score = -std::numeric_limits<double>::infinity();
  int best_label = 0;
  for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(classes.size()); ++c) {
    double score = log_priors(c);
    for (Eigen::Index d = 0; d < coord.size(); ++d) {
      const double var = variances(c, d);
      const double diff = coord(d) - means(c, d);
      score += -0.5 * std::log(2.0 * M_PI * var) - diff * diff / (2.0 * var);
    }
    const int label = classes[static_cast<std::size_t>(c)];
    if (score > best_score || (score == best_score && label < best_label)) {
      best_score = score;
      best_label = label;
    }
  }
  return best_label;
}

Knn Knn::fit(const Eigen::MatrixXd& coords, const std::vector<int>& labels, int k) {
  if (coords.rows() == 0 || labels.size() != static_cast<std::size_t>(coords.rows())) {
    raise(Errc::empty_data, "Knn::fit: need one label per coordinate row");
  }
  if (k < 1 || k > coords.rows()) {
    raise(Errc::invalid_argument, "Knn::fit: k=" + std::to_string(k) + " not in 1.." +
                                      std::to_string(coords.rows()));
  }
  Knn model;
  model.coords = coords;
  model.labels = labels;
  model.k = k;
  return model;
}

int Knn::predict(const Eigen::VectorXd& coord) const {
  if (coord.size() != coords.cols()) {
    raise(Errc::dimension_mismatch, "Knn::predict: coordinate has dimension " +
                                        std::to_string(coord.size()) + ", model expects " +
                                        std::to_string(coords.cols()));
  }
  const Eigen::Index n = coords.rows();
  std::vector<std::pair<double, Eigen::Index>> dist(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    dist[static_cast<std::size_t>(i)] = {(coords.row(i).transpose() - coord).norm(), i};
  }
  // Distance ties resolve to the lower training index via the pair ordering.
  std::partial_sort(dist.begin(), dist.begin() + k, dist.end());

  std::map<int, int> votes;
  for (int i = 0; i < k; ++i) {
    ++votes[labels[static_cast<std::size_t>(dist[static_cast<std::size_t>(i)].second)]];
  }
  int best_label = 0, best_votes = -1;
  for (const auto& [label, count] : votes) {
    if (count > best_votes) {  // map iterates labels ascending: ties keep the lower label
      best_votes = count;
      best_label = label;
    }
  }
  return best_label;
}

double evaluate_classifier(const std::function<int(const Eigen::VectorXd&)>& predict,
                           const Eigen::MatrixXd& coords, const std::vector<int>& labels,
                           const Split& split) {
  if (split.test.empty()) raise(Errc::empty_data, "evaluate_classifier: empty test split");
  int correct = 0;
  for (int idx : split.test) {
    if (predict(coords.row(idx).transpose()) == labels[static_cast<std::size_t>(idx)]) {
      ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(split.test.size());
}

int FrameClassifier::predict(const Eigen::VectorXd& feature) const {
  const Eigen::VectorXd coord = project(projection, feature);
  return std::visit([&](const auto& m) { return m.predict(coord); }, model);
}

using detail::matrix_from_json;
using detail::matrix_to_json;
using detail::vector_from_json;
using detail::vector_to_json;

void save_classifier(const std::filesystem::path& path, const FrameClassifier& classifier) {
  nlohmann::json j;
  j["kind"] = "frame_classifier";
  j["mode"] = classifier.mode;
  j["alphabet_size"] = classifier.alphabet_size;
  j["projection"] = {
      {"rank", classifier.projection.rank},
      {"centered", classifier.projection.centered},
      {"left", matrix_to_json(classifier.projection.left)},
      {"singular", vector_to_json(classifier.projection.singular)},
      {"mean", vector_to_json(classifier.projection.mean)},
  };
  if (std::holds_alternative<Knn>(classifier.model)) {
    const auto& m = std::get<Knn>(classifier.model);
    j["model"] = {{"type", "knn"},
                  {"k", m.k},
                  {"coords", matrix_to_json(m.coords)},
                  {"labels", m.labels}};
  } else {
    const auto& m = std::get<GaussianNb>(classifier.model);
    j["model"] = {{"type", "gaussian_nb"},
                  {"classes", m.classes},
                  {"log_priors", vector_to_json(m.log_priors)},
                  {"means", matrix_to_json(m.means)},
                  {"variances", matrix_to_json(m.variances)},
                  {"variance_floor", m.variance_floor}};
  }
  std::ofstream out(path);
  if (!out) raise(Errc::io_failure, "cannot write '" + path.string() + "'");
  out << j.dump(2) << "\n";
}

FrameClassifier load_classifier(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::missing_file, "classifier file '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::io_failure, "'" + path.string() + "': " + e.what());
  }
  try {
    FrameClassifier c;
    c.mode = j.at("mode").get<std::string>();
    c.alphabet_size = j.at("alphabet_size").get<int>();
    const auto& pj = j.at("projection");
    c.projection.rank = pj.at("rank").get<int>();
    c.projection.centered = pj.at("centered").get<bool>();
    c.projection.left = matrix_from_json(pj.at("left"));
    c.projection.singular = vector_from_json(pj.at("singular"));
    c.projection.mean = vector_from_json(pj.at("mean"));
    const auto& mj = j.at("model");
    const std::string type = mj.at("type").get<std::string>();
    if (type == "knn") {
      Knn m;
      m.k = mj.at("k").get<int>();
      m.coords = matrix_from_json(mj.at("coords"));
      m.labels = mj.at("labels").get<std::vector<int>>();
      c.model = std::move(m);
    } else if (type == "gaussian_nb") {
      GaussianNb m;
      m.classes = mj.at("classes").get<std::vector<int>>();
      m.log_priors = vector_from_json(mj.at("log_priors"));
      m.means = matrix_from_json(mj.at("means"));
      m.variances = matrix_from_json(mj.at("variances"));
      m.variance_floor = mj.at("variance_floor").get<double>();
      c.model = std::move(m);
    } else {
      raise(Errc::bad_config, "'" + path.string() + "': unknown model type '" + type + "'");
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::io_failure, "'" + path.string() + "': " + e.what());
  }
}

}  // namespace lipread

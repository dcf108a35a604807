#include "lipread/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include <json.hpp>

#include "eigen_json.hpp"
#include "lipread/error.hpp"

namespace lipread {
namespace {

constexpr double kRowSumTol = 1e-10;
constexpr double kSmoothing = 1e-10;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_distribution(const Eigen::VectorXd& row, const std::string& what) {
  if ((row.array() < 0.0).any()) {
    raise(Errc::invalid_argument, what + " has a negative entry");
  }
  if (std::abs(row.sum() - 1.0) > kRowSumTol) {
    raise(Errc::invalid_argument, what + " sums to " + std::to_string(row.sum()) + ", not 1");
  }
}

// Scaled forward pass. Fills alpha (T x Q, rows normalized) and the per-step
// normalizers; returns log P(seq | h), or -inf when some step has zero mass.
double forward_scaled(const Hmm& h, const std::vector<int>& seq, Eigen::MatrixXd& alpha,
                      Eigen::VectorXd& scale) {
  const auto t_len = static_cast<Eigen::Index>(seq.size());
  const int q = h.n_states;
  alpha.resize(t_len, q);
  scale.resize(t_len);

  double log_prob = 0.0;
  for (Eigen::Index t = 0; t < t_len; ++t) {
    const int symbol = seq[static_cast<std::size_t>(t)] - 1;
    Eigen::RowVectorXd unnorm;
    if (t == 0) {
      unnorm = h.initial.transpose().cwiseProduct(h.emission.col(symbol).transpose());
    } else {
      unnorm = (alpha.row(t - 1) * h.transition).cwiseProduct(h.emission.col(symbol).transpose());
    }
    const double c = unnorm.sum();
    if (c <= 0.0) return kNegInf;
    alpha.row(t) = unnorm / c;
    scale(t) = c;
    log_prob += std::log(c);
  }
  return log_prob;
}

void check_symbols(const std::vector<int>& seq, int alphabet_size, const std::string& where) {
  for (int s : seq) {
    if (s < 1 || s > alphabet_size) {
      raise(Errc::symbol_out_of_range, where + ": symbol " + std::to_string(s) +
                                           " outside 1.." + std::to_string(alphabet_size));
    }
  }
}

// Structural shape of the model being trained. In pad_stop mode the last
// state/symbol are the absorbing stop machinery whose zero entries must stay
// exactly zero (that is what makes trailing stop symbols likelihood-neutral),
// so smoothing applies only to the free entries.
struct Structure {
  int q = 0;             // total states
  int m = 0;             // total symbols
  bool pad_stop = false;

  bool transition_row_fixed(int i) const { return pad_stop && i == q - 1; }
  bool emission_free(int i, int s) const {
    return !pad_stop || (i < q - 1 && s < m - 1);
  }
  int free_states() const { return pad_stop ? q - 1 : q; }
};

Hmm init_model(const Structure& st, Rng& rng, bool uniform_initial) {
  Hmm h;
  h.n_states = st.q;
  h.alphabet_size = st.m;
  h.initial = Eigen::VectorXd::Zero(st.q);
  h.transition = Eigen::MatrixXd::Zero(st.q, st.q);
  h.emission = Eigen::MatrixXd::Zero(st.q, st.m);

  const int fq = st.free_states();
  if (uniform_initial) {
    for (int i = 0; i < fq; ++i) h.initial(i) = 1.0 / fq;
  } else {
    const std::vector<double> pi = rng.dirichlet(fq, 1.0);
    for (int i = 0; i < fq; ++i) h.initial(i) = pi[static_cast<std::size_t>(i)];
  }
  for (int i = 0; i < st.q; ++i) {
    if (st.transition_row_fixed(i)) {
      h.transition(i, st.q - 1) = 1.0;  // absorbing stop state
      h.emission(i, st.m - 1) = 1.0;    // emits only the stop symbol
      continue;
    }
    const std::vector<double> a = rng.dirichlet(st.q, 1.0);
    for (int j = 0; j < st.q; ++j) h.transition(i, j) = a[static_cast<std::size_t>(j)];
    const int fm = st.pad_stop ? st.m - 1 : st.m;
    const std::vector<double> b = rng.dirichlet(fm, 1.0);
    for (int s = 0; s < fm; ++s) h.emission(i, s) = b[static_cast<std::size_t>(s)];
  }
  return h;
}

// One full EM run from a random start; returns the result for this restart.
TrainResult run_em(const std::vector<std::vector<int>>& data, const Structure& st,
                   const TrainConfig& cfg, Rng& rng) {
  Hmm h = init_model(st, rng, cfg.uniform_initial);
  const int q = st.q, m = st.m;

  TrainResult result;
  Eigen::MatrixXd alpha, beta;
  Eigen::VectorXd scale;

  auto total_log_likelihood = [&](const Hmm& model) {
    double total = 0.0;
    for (const auto& seq : data) {
      const double ll = forward_scaled(model, seq, alpha, scale);
      if (ll == kNegInf) {
        raise(Errc::numerical_failure, "baum_welch: training sequence has zero probability");
      }
      total += ll;
    }
    return total;
  };

  bool converged = false;
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    Eigen::VectorXd pi_acc = Eigen::VectorXd::Zero(q);
    Eigen::MatrixXd a_acc = Eigen::MatrixXd::Zero(q, q);
    Eigen::MatrixXd b_acc = Eigen::MatrixXd::Zero(q, m);
    double total_ll = 0.0;

    for (const auto& seq : data) {
      const auto t_len = static_cast<Eigen::Index>(seq.size());
      const double ll = forward_scaled(h, seq, alpha, scale);
      if (ll == kNegInf) {
        raise(Errc::numerical_failure, "baum_welch: training sequence has zero probability");
      }
      total_ll += ll;

      // Scaled backward pass sharing the forward normalizers.
      beta.resize(t_len, q);
      beta.row(t_len - 1).setConstant(1.0 / scale(t_len - 1));
      for (Eigen::Index t = t_len - 2; t >= 0; --t) {
        const int next_symbol = seq[static_cast<std::size_t>(t + 1)] - 1;
        beta.row(t) =
            (h.transition *
             h.emission.col(next_symbol).cwiseProduct(beta.row(t + 1).transpose()))
                .transpose() /
            scale(t);
      }

      // gamma_t(i) = alpha_t(i) beta_t(i) scale_t; xi needs no extra factor.
      for (Eigen::Index t = 0; t < t_len; ++t) {
        const Eigen::RowVectorXd gamma =
            alpha.row(t).cwiseProduct(beta.row(t)) * scale(t);
        if (t == 0) pi_acc += gamma.transpose();
        b_acc.col(seq[static_cast<std::size_t>(t)] - 1) += gamma.transpose();
        if (t + 1 < t_len) {
          const int next_symbol = seq[static_cast<std::size_t>(t + 1)] - 1;
          a_acc += (alpha.row(t).transpose() *
                    h.emission.col(next_symbol).cwiseProduct(beta.row(t + 1).transpose())
                        .transpose())
                       .cwiseProduct(h.transition);
        }
      }
    }

    result.ll_history.push_back(total_ll);
    if (iter > 0) {
      const double prev = result.ll_history[static_cast<std::size_t>(iter - 1)];
      const double rel = std::abs(total_ll - prev) / std::max(std::abs(prev), 1e-12);
      if (rel < cfg.ll_tol) {
        converged = true;
        break;
      }
    }

    // M-step: smooth the free expected counts and renormalize each row.
    // Structural zeros receive no smoothing so they stay exactly zero.
    if (!cfg.uniform_initial) {
      const int fq = st.free_states();
      double denom = 0.0;
      for (int i = 0; i < fq; ++i) denom += pi_acc(i) + kSmoothing;
      for (int i = 0; i < fq; ++i) h.initial(i) = (pi_acc(i) + kSmoothing) / denom;
    }
    for (int i = 0; i < q; ++i) {
      if (st.transition_row_fixed(i)) continue;
      double a_denom = 0.0;
      for (int j = 0; j < q; ++j) a_denom += a_acc(i, j) + kSmoothing;
      for (int j = 0; j < q; ++j) h.transition(i, j) = (a_acc(i, j) + kSmoothing) / a_denom;

      double b_denom = 0.0;
      for (int s = 0; s < m; ++s) {
        if (st.emission_free(i, s)) b_denom += b_acc(i, s) + kSmoothing;
      }
      for (int s = 0; s < m; ++s) {
        if (st.emission_free(i, s)) h.emission(i, s) = (b_acc(i, s) + kSmoothing) / b_denom;
      }
    }
    result.iterations = iter + 1;
  }

  if (!converged) {
    // Ran out of iterations after a final M-step: score the updated model so
    // final_ll always describes the model actually returned.
    result.ll_history.push_back(total_log_likelihood(h));
  }
  result.model = std::move(h);
  result.final_ll = result.ll_history.back();
  return result;
}

}  // namespace

void Hmm::validate() const {
  if (n_states < 1 || alphabet_size < 1) {
    raise(Errc::invalid_argument, "Hmm: n_states and alphabet_size must be >= 1");
  }
  if (initial.size() != n_states || transition.rows() != n_states ||
      transition.cols() != n_states || emission.rows() != n_states ||
      emission.cols() != alphabet_size) {
    raise(Errc::invalid_argument, "Hmm: parameter shapes disagree with n_states/alphabet_size");
  }
  check_distribution(initial, "initial distribution");
  for (int i = 0; i < n_states; ++i) {
    check_distribution(transition.row(i).transpose(),
                       "transition row " + std::to_string(i + 1));
    check_distribution(emission.row(i).transpose(), "emission row " + std::to_string(i + 1));
  }
}

double forward_log_likelihood(const Hmm& h, const std::vector<int>& seq) {
  if (seq.empty()) raise(Errc::empty_data, "forward_log_likelihood: empty sequence");
  check_symbols(seq, h.alphabet_size, "forward_log_likelihood");
  Eigen::MatrixXd alpha;
  Eigen::VectorXd scale;
  return forward_scaled(h, seq, alpha, scale);
}

Hmm random_hmm(int n_states, int alphabet_size, Rng& rng, double concentration) {
  if (n_states < 1 || alphabet_size < 1) {
    raise(Errc::invalid_argument, "random_hmm: n_states and alphabet_size must be >= 1");
  }
  Hmm h;
  h.n_states = n_states;
  h.alphabet_size = alphabet_size;
  h.initial.resize(n_states);
  h.transition.resize(n_states, n_states);
  h.emission.resize(n_states, alphabet_size);
  const std::vector<double> pi = rng.dirichlet(n_states, concentration);
  for (int i = 0; i < n_states; ++i) h.initial(i) = pi[static_cast<std::size_t>(i)];
  for (int i = 0; i < n_states; ++i) {
    const auto a = rng.dirichlet(n_states, concentration);
    for (int j = 0; j < n_states; ++j) h.transition(i, j) = a[static_cast<std::size_t>(j)];
    const auto b = rng.dirichlet(alphabet_size, concentration);
    for (int s = 0; s < alphabet_size; ++s) h.emission(i, s) = b[static_cast<std::size_t>(s)];
  }
  return h;
}

std::vector<int> sample_sequence(const Hmm& h, int length, std::uint64_t seed) {
  if (length < 1) raise(Errc::invalid_argument, "sample_sequence: length must be >= 1");
  Rng rng(seed);
  std::vector<int> seq(static_cast<std::size_t>(length));
  std::vector<double> row(static_cast<std::size_t>(h.n_states));
  std::vector<double> erow(static_cast<std::size_t>(h.alphabet_size));

  auto draw = [&](const Eigen::VectorXd& dist, std::vector<double>& buf) {
    for (Eigen::Index i = 0; i < dist.size(); ++i) buf[static_cast<std::size_t>(i)] = dist(i);
    return static_cast<int>(rng.discrete(buf));
  };

  int state = draw(h.initial, row);
  for (int t = 0; t < length; ++t) {
    seq[static_cast<std::size_t>(t)] = draw(h.emission.row(state).transpose(), erow) + 1;
    if (t + 1 < length) state = draw(h.transition.row(state).transpose(), row);
  }
  return seq;
}

TrainResult baum_welch(const SequenceSet& data, int n_states, int alphabet_size,
                       const TrainConfig& cfg) {
  if (n_states < 1) raise(Errc::invalid_argument, "baum_welch: n_states must be >= 1");
  if (cfg.max_iters < 1 || cfg.restarts < 1) {
    raise(Errc::invalid_argument, "baum_welch: max_iters and restarts must be >= 1");
  }
  if (data.sequences.empty()) raise(Errc::empty_data, "baum_welch: no training sequences");
  std::size_t max_len = 0;
  for (const auto& seq : data.sequences) {
    if (seq.empty()) raise(Errc::empty_data, "baum_welch: empty training sequence");
    for (int s : seq) {
      if (s < 1 || s > alphabet_size) {
        raise(Errc::alphabet_mismatch, "baum_welch: symbol " + std::to_string(s) +
                                           " outside declared alphabet 1.." +
                                           std::to_string(alphabet_size));
      }
    }
    max_len = std::max(max_len, seq.size());
  }

  Structure st;
  st.pad_stop = cfg.length_mode == LengthMode::pad_stop;
  st.q = st.pad_stop ? n_states + 1 : n_states;
  st.m = st.pad_stop ? alphabet_size + 1 : alphabet_size;

  std::vector<std::vector<int>> train = data.sequences;
  if (st.pad_stop) {
    const std::size_t pad_to =
        std::max(max_len, static_cast<std::size_t>(std::max(cfg.pad_length, 0)));
    const int stop_symbol = alphabet_size + 1;
    for (auto& seq : train) seq.resize(pad_to, stop_symbol);
  }

  TrainResult best;
  bool have_best = false;
  for (int r = 0; r < cfg.restarts; ++r) {
    Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(r)));
    TrainResult candidate = run_em(train, st, cfg, rng);
    if (!have_best || candidate.final_ll > best.final_ll) {
      best = std::move(candidate);
      have_best = true;
    }
  }
  return best;
}

WordModelBank train_bank(const std::map<std::string, SequenceSet>& word_data,
                         int alphabet_size,
                         const std::function<int(const std::string&)>& states_for_word,
                         const TrainConfig& cfg) {
  if (word_data.empty()) raise(Errc::empty_data, "train_bank: no words to train");

  WordModelBank bank;
  bank.alphabet_size = alphabet_size;
  bank.length_mode = cfg.length_mode;

  std::size_t global_max = 0;
  for (const auto& [word, set] : word_data) {
    if (set.sequences.size() < 2) {
      raise(Errc::too_few_sequences, "train_bank: word '" + word + "' has " +
                                         std::to_string(set.sequences.size()) +
                                         " training sequences, need at least 2");
    }
    for (const auto& seq : set.sequences) global_max = std::max(global_max, seq.size());
  }
  if (cfg.length_mode == LengthMode::pad_stop) {
    bank.pad_length = static_cast<int>(global_max);
  }

  for (const auto& [word, set] : word_data) {
    TrainConfig word_cfg = cfg;
    word_cfg.seed = mix_seed(cfg.seed, word);
    word_cfg.pad_length = bank.pad_length;
    const int q = states_for_word(word);
    TrainResult trained = baum_welch(set, q, alphabet_size, word_cfg);
    bank.models[word] =
        WordModel{std::move(trained.model), trained.final_ll, trained.iterations};
  }
  return bank;
}

DecodeResult decode_word(const WordModelBank& bank, const std::vector<int>& seq) {
  if (bank.models.empty()) raise(Errc::empty_data, "decode_word: empty model bank");
  if (seq.empty()) raise(Errc::empty_data, "decode_word: empty sequence");
  const bool padded = bank.length_mode == LengthMode::pad_stop;
  const int stop = bank.alphabet_size + 1;
  // Queries may already carry the stop symbol in pad_stop mode; trailing
  // stops are normalized away so any number of them scores identically.
  check_symbols(seq, padded ? stop : bank.alphabet_size, "decode_word");

  std::vector<int> query = seq;
  if (padded) {
    while (!query.empty() && query.back() == stop) query.pop_back();
    if (query.size() < static_cast<std::size_t>(bank.pad_length)) {
      query.resize(static_cast<std::size_t>(bank.pad_length), stop);
    }
  }

  DecodeResult result;
  double best = kNegInf;
  bool first = true;
  for (const auto& [word, model] : bank.models) {
    const double ll = forward_log_likelihood(model.model, query);
    result.scores.push_back({word, ll});
    // The map iterates words in lexicographic order, so a strict > keeps the
    // smaller word on ties.
    if (first || ll > best) {
      best = ll;
      result.word = word;
      first = false;
    }
  }
  return result;
}

const char* length_mode_name(LengthMode mode) {
  return mode == LengthMode::pad_stop ? "pad_stop" : "native";
}

LengthMode parse_length_mode(const std::string& name) {
  if (name == "native") return LengthMode::native;
  if (name == "pad_stop") return LengthMode::pad_stop;
  raise(Errc::bad_config, "unknown length mode '" + name + "' (want native or pad_stop)");
}

void save_bank(const std::filesystem::path& path, const WordModelBank& bank) {
  nlohmann::json j;
  j["kind"] = "word_model_bank";
  j["alphabet_size"] = bank.alphabet_size;
  j["length_mode"] = length_mode_name(bank.length_mode);
  j["pad_length"] = bank.pad_length;
  nlohmann::json models = nlohmann::json::object();
  for (const auto& [word, wm] : bank.models) {
    models[word] = {
        {"n_states", wm.model.n_states},
        {"alphabet_size", wm.model.alphabet_size},
        {"initial", detail::vector_to_json(wm.model.initial)},
        {"transition", detail::matrix_to_json(wm.model.transition)},
        {"emission", detail::matrix_to_json(wm.model.emission)},
        {"final_ll", wm.final_ll},
        {"iterations", wm.iterations},
    };
  }
  j["models"] = std::move(models);
  std::ofstream out(path);
  if (!out) raise(Errc::io_failure, "cannot write '" + path.string() + "'");
  out << j.dump(2) << "\n";
}

WordModelBank load_bank(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::missing_file, "model bank file '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::io_failure, "'" + path.string() + "': " + e.what());
  }
  try {
    WordModelBank bank;
    bank.alphabet_size = j.at("alphabet_size").get<int>();
    bank.length_mode = parse_length_mode(j.at("length_mode").get<std::string>());
    bank.pad_length = j.at("pad_length").get<int>();
    for (const auto& [word, mj] : j.at("models").items()) {
      WordModel wm;
      wm.model.n_states = mj.at("n_states").get<int>();
      wm.model.alphabet_size = mj.at("alphabet_size").get<int>();
      wm.model.initial = detail::vector_from_json(mj.at("initial"));
      wm.model.transition = detail::matrix_from_json(mj.at("transition"));
      wm.model.emission = detail::matrix_from_json(mj.at("emission"));
      wm.final_ll = mj.at("final_ll").get<double>();
      wm.iterations = mj.at("iterations").get<int>();
      wm.model.validate();
      bank.models[word] = std::move(wm);
    }
    return bank;
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::io_failure, "'" + path.string() + "': " + e.what());
  }
}

}  // namespace lipread

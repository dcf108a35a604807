#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "lipread/rng.hpp"

namespace lipread {

// Discrete-observation hidden Markov model. Symbols are 1-based externally
// (1..alphabet_size); states are an internal detail.
struct Hmm {
  int n_states = 0;      // Q
  int alphabet_size = 0; // M
  Eigen::VectorXd initial;     // pi, length Q
  Eigen::MatrixXd transition;  // A, Q x Q row-stochastic
  Eigen::MatrixXd emission;    // B, Q x M row-stochastic

  // Throws when any row of A, B or pi fails to be a distribution
  // (non-negative, summing to 1 within 1e-10).
  void validate() const;
};

struct SequenceSet {
  std::vector<std::vector<int>> sequences;  // symbols in 1..M, lengths may differ
};

// How Baum-Welch handles sequences of different lengths: `native` accumulates
// expected counts across raw sequences; `pad_stop` reproduces the classic
// equal-length workaround by appending a dedicated stop symbol (emitted by an
// absorbing extra state) up to the maximum training length.
enum class LengthMode { native, pad_stop };

struct TrainConfig {
  int max_iters = 100;
  double ll_tol = 1e-6;  // relative log-likelihood improvement threshold
  std::uint64_t seed = 0;
  int restarts = 5;
  LengthMode length_mode = LengthMode::native;
  bool uniform_initial = false;  // fix pi uniform instead of learning it
  int pad_length = 0;            // pad_stop target length; 0 = max training length
};

struct TrainResult {
  Hmm model;
  std::vector<double> ll_history;  // total training log-likelihood per iteration
  double final_ll = 0.0;           // log-likelihood of the returned model
  int iterations = 0;              // EM update steps performed
};

// Exact log P(seq | h) via the scaled forward recursion. Impossible sequences
// yield -infinity; symbols outside 1..M are an error.
double forward_log_likelihood(const Hmm& h, const std::vector<int>& seq);

// Random model with Dirichlet(concentration) rows, for initialization and
// synthetic generators.
Hmm random_hmm(int n_states, int alphabet_size, Rng& rng, double concentration = 1.0);

// Draws a length-T symbol sequence from the model, deterministically per seed.
std::vector<int> sample_sequence(const Hmm& h, int length, std::uint64_t seed);

// Multi-sequence Baum-Welch with seeded random restarts; returns the restart
// with the best final total log-likelihood. In pad_stop mode the returned
// model has n_states + 1 states and alphabet_size + 1 symbols (the stop
// machinery); its structural zeros are kept exact across iterations.
TrainResult baum_welch(const SequenceSet& data, int n_states, int alphabet_size,
                       const TrainConfig& cfg);

struct WordModel {
  Hmm model;
  double final_ll = 0.0;
  int iterations = 0;
};

struct WordModelBank {
  std::map<std::string, WordModel> models;
  int alphabet_size = 0;  // original M, before any stop extension
  LengthMode length_mode = LengthMode::native;
  int pad_length = 0;  // pad_stop: shared pad target across the bank
};

// Trains one model per word (independent runs, per-word seeds derived from
// cfg.seed and the word). states_for_word supplies Q per word. Every word
// needs at least 2 training sequences. In pad_stop mode all words share one
// pad length: the longest sequence across the whole bank.
WordModelBank train_bank(const std::map<std::string, SequenceSet>& word_data,
                         int alphabet_size,
                         const std::function<int(const std::string&)>& states_for_word,
                         const TrainConfig& cfg);

struct DecodeResult {
  std::string word;
  std::vector<std::pair<std::string, double>> scores;  // per word, sorted by word
};

// Scores the sequence against every model and returns the argmax; exact ties
// resolve to the lexicographically smaller word.
DecodeResult decode_word(const WordModelBank& bank, const std::vector<int>& seq);

const char* length_mode_name(LengthMode mode);
LengthMode parse_length_mode(const std::string& name);

void save_bank(const std::filesystem::path& path, const WordModelBank& bank);
WordModelBank load_bank(const std::filesystem::path& path);

}  // namespace lipread

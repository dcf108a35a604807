#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace lipread {

// Defaults for every tunable in one place; a JSON config file overrides any
// subset of fields, everything else keeps its default.
struct FeatureSettings {
  std::string mode = "mask_grid";  // mask_grid | raw_roi
  int grid_w = 32;
  int grid_h = 16;
  int kmeans_k = 3;
};

struct ClassifierSettings {
  std::string type = "knn";  // knn | nb
  int knn_k = 1;
  int svd_rank = 30;
  bool center = false;
  double train_fraction = 0.75;
};

struct HmmSettings {
  int max_iters = 100;
  double ll_tol = 1e-6;
  int restarts = 5;
  std::string length_mode = "native";  // native | pad_stop
  bool uniform_initial = false;
  // Hidden states per word; 0 = distinct symbols in the word's canonical
  // pronunciation (minimum 2). q_overrides wins for listed words.
  int default_states = 0;
  std::map<std::string, int> q_overrides;
};

struct SynthSettings {
  std::vector<std::string> words = {"bin", "blue", "lay", "place", "set"};
  int instances = 40;
  int states = 3;
  int alphabet = 11;
  double noise = 0.1;  // per-symbol replacement probability
  int min_len = 10;
  int max_len = 18;
  double concentration = 0.25;  // Dirichlet concentration of generator rows
  double min_distance = 1.3;    // minimum pairwise mean emission-row L1 gap
};

struct EvalSettings {
  double train_fraction = 0.75;
  // Candidate word sets; one report row per (word in set, set). Empty means
  // "one set containing every word in the input".
  std::vector<std::vector<std::string>> subsets;
};

struct RunConfig {
  std::uint64_t seed = 0;
  std::string mode = "viseme";  // phoneme | viseme
  bool use_silence = true;
  FeatureSettings feature;
  ClassifierSettings classifier;
  HmmSettings hmm;
  SynthSettings synth;
  EvalSettings eval;
};

// Loads a JSON config; absent keys keep their defaults, unknown keys are an
// error so typos fail loudly.
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace lipread

#include "lipread/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "lipread/error.hpp"

namespace lipread {
namespace {

using nlohmann::json;

// Pulls `key` out of `j` into `value` when present; type errors become
// BadConfig with the offending key named.
template <typename T>
void read_field(const json& j, const char* key, T& value, const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  try {
    value = it->get<T>();
  } catch (const json::exception& e) {
    raise(Errc::bad_config, where + "." + key + ": " + e.what());
  }
}

void check_keys(const json& j, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, unused] : j.items()) {
    (void)unused;
    if (!known.count(key)) {
      raise(Errc::bad_config, "unknown config key '" + where + "." + key + "'");
    }
  }
}

void validate(const RunConfig& c) {
  auto demand = [](bool ok, const std::string& what) {
    if (!ok) raise(Errc::bad_config, what);
  };
  demand(c.mode == "phoneme" || c.mode == "viseme", "mode must be phoneme or viseme");
  demand(c.feature.mode == "mask_grid" || c.feature.mode == "raw_roi",
         "feature.mode must be mask_grid or raw_roi");
  demand(c.feature.grid_w >= 1 && c.feature.grid_h >= 1, "feature grid must be >= 1x1");
  demand(c.feature.kmeans_k >= 2 && c.feature.kmeans_k <= 4, "feature.kmeans_k must be in 2..4");
  demand(c.classifier.type == "knn" || c.classifier.type == "nb",
         "classifier.type must be knn or nb");
  demand(c.classifier.knn_k >= 1, "classifier.knn_k must be >= 1");
  demand(c.classifier.svd_rank >= 1, "classifier.svd_rank must be >= 1");
  demand(c.classifier.train_fraction > 0.0 && c.classifier.train_fraction < 1.0,
         "classifier.train_fraction must lie in (0, 1)");
  demand(c.hmm.max_iters >= 1, "hmm.max_iters must be >= 1");
  demand(c.hmm.restarts >= 1, "hmm.restarts must be >= 1");
  demand(c.hmm.length_mode == "native" || c.hmm.length_mode == "pad_stop",
         "hmm.length_mode must be native or pad_stop");
  demand(c.hmm.default_states >= 0, "hmm.default_states must be >= 0");
  demand(!c.synth.words.empty(), "synth.words must not be empty");
  demand(c.synth.instances >= 4, "synth.instances must be >= 4");
  demand(c.synth.states >= 1, "synth.states must be >= 1");
  demand(c.synth.alphabet >= 2, "synth.alphabet must be >= 2");
  demand(c.synth.noise >= 0.0 && c.synth.noise < 1.0, "synth.noise must lie in [0, 1)");
  demand(c.synth.min_len >= 1 && c.synth.max_len >= c.synth.min_len,
         "synth lengths must satisfy 1 <= min_len <= max_len");
  demand(c.eval.train_fraction > 0.0 && c.eval.train_fraction < 1.0,
         "eval.train_fraction must lie in (0, 1)");
  for (const auto& subset : c.eval.subsets) {
    demand(!subset.empty(), "eval.subsets entries must not be empty");
  }
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::missing_file, "config file '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    raise(Errc::bad_config, "'" + path.string() + "': " + e.what());
  }

  RunConfig c;
  check_keys(j, {"seed", "mode", "use_silence", "feature", "classifier", "hmm", "synth", "eval"},
             "config");
  read_field(j, "seed", c.seed, "config");
  read_field(j, "mode", c.mode, "config");
  read_field(j, "use_silence", c.use_silence, "config");

  if (j.contains("feature")) {
    const json& f = j.at("feature");
    check_keys(f, {"mode", "grid_w", "grid_h", "kmeans_k"}, "feature");
    read_field(f, "mode", c.feature.mode, "feature");
    read_field(f, "grid_w", c.feature.grid_w, "feature");
    read_field(f, "grid_h", c.feature.grid_h, "feature");
    read_field(f, "kmeans_k", c.feature.kmeans_k, "feature");
  }
  if (j.contains("classifier")) {
    const json& f = j.at("classifier");
    check_keys(f, {"type", "knn_k", "svd_rank", "center", "train_fraction"}, "classifier");
    read_field(f, "type", c.classifier.type, "classifier");
    read_field(f, "knn_k", c.classifier.knn_k, "classifier");
    read_field(f, "svd_rank", c.classifier.svd_rank, "classifier");
    read_field(f, "center", c.classifier.center, "classifier");
    read_field(f, "train_fraction", c.classifier.train_fraction, "classifier");
  }
  if (j.contains("hmm")) {
    const json& f = j.at("hmm");
    check_keys(f,
               {"max_iters", "ll_tol", "restarts", "length_mode", "uniform_initial",
                "default_states", "q_overrides"},
               "hmm");
    read_field(f, "max_iters", c.hmm.max_iters, "hmm");
    read_field(f, "ll_tol", c.hmm.ll_tol, "hmm");
    read_field(f, "restarts", c.hmm.restarts, "hmm");
    read_field(f, "length_mode", c.hmm.length_mode, "hmm");
    read_field(f, "uniform_initial", c.hmm.uniform_initial, "hmm");
    read_field(f, "default_states", c.hmm.default_states, "hmm");
    read_field(f, "q_overrides", c.hmm.q_overrides, "hmm");
  }
  if (j.contains("synth")) {
    const json& f = j.at("synth");
    check_keys(f,
               {"words", "instances", "states", "alphabet", "noise", "min_len", "max_len",
                "concentration", "min_distance"},
               "synth");
    read_field(f, "words", c.synth.words, "synth");
    read_field(f, "instances", c.synth.instances, "synth");
    read_field(f, "states", c.synth.states, "synth");
    read_field(f, "alphabet", c.synth.alphabet, "synth");
    read_field(f, "noise", c.synth.noise, "synth");
    read_field(f, "min_len", c.synth.min_len, "synth");
    read_field(f, "max_len", c.synth.max_len, "synth");
    read_field(f, "concentration", c.synth.concentration, "synth");
    read_field(f, "min_distance", c.synth.min_distance, "synth");
  }
  if (j.contains("eval")) {
    const json& f = j.at("eval");
    check_keys(f, {"train_fraction", "subsets"}, "eval");
    read_field(f, "train_fraction", c.eval.train_fraction, "eval");
    read_field(f, "subsets", c.eval.subsets, "eval");
  }

  validate(c);
  return c;
}

}  // namespace lipread

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lipread/alignment.hpp"
#include "lipread/config.hpp"
#include "lipread/hmm.hpp"

namespace lipread {

// Blueprint for a synthetic corpus: one generator HMM per word plus the
// sampling parameters. Serves as the desk-scale stand-in for a real corpus.
struct SynthSpec {
  std::vector<std::string> words;
  std::map<std::string, Hmm> generators;
  int alphabet_size = 0;
  int instances = 0;
  double noise = 0.0;  // per-symbol uniform replacement probability
  int min_len = 1;
  int max_len = 1;
  std::uint64_t seed = 0;
};

// Draws per-word generators whose emission rows are pairwise well separated
// (mean row L1 distance >= settings.min_distance), by rejection sampling
// deterministic per seed.
SynthSpec make_synth_spec(const SynthSettings& settings, std::uint64_t seed);

// Synthetic video: one instance of every word, concatenated, with a
// transcript marking each word's frame interval.
struct SynthVideo {
  std::string video_id;
  std::vector<int> symbols;
  Transcript transcript;
};

struct SynthCorpus {
  std::vector<SynthVideo> videos;  // one per instance index
  int alphabet_size = 0;
};

// Samples the corpus: video i concatenates instance i of every word (in
// listed order); each symbol is independently replaced by a uniform draw
// with probability noise. Deterministic per (spec, seed).
SynthCorpus synth_generate(const SynthSpec& spec);

}  // namespace lipread

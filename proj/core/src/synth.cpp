#include "lipread/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "lipread/error.hpp"
#include "lipread/rng.hpp"

namespace lipread {
namespace {

// Mean L1 distance between corresponding emission rows of two generators;
// the coarse separation measure that the rejection sampler enforces.
double emission_distance(const Hmm& a, const Hmm& b) {
  double total = 0.0;
  for (int i = 0; i < a.n_states; ++i) {
    total += (a.emission.row(i) - b.emission.row(i)).cwiseAbs().sum();
  }
  return total / a.n_states;
}

}  // namespace

SynthSpec make_synth_spec(const SynthSettings& settings, std::uint64_t seed) {
  SynthSpec spec;
  spec.words = settings.words;
  spec.alphabet_size = settings.alphabet;
  spec.instances = settings.instances;
  spec.noise = settings.noise;
  spec.min_len = settings.min_len;
  spec.max_len = settings.max_len;
  spec.seed = seed;

  constexpr int kMaxAttempts = 1000;
  std::vector<const Hmm*> accepted;
  for (const auto& word : spec.words) {
    if (spec.generators.count(word)) {
      raise(Errc::invalid_argument, "make_synth_spec: duplicate word '" + word + "'");
    }
    bool placed = false;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
      Rng rng(mix_seed(mix_seed(seed, "gen:" + word), static_cast<std::uint64_t>(attempt)));
      Hmm candidate =
          random_hmm(settings.states, settings.alphabet, rng, settings.concentration);
      const bool distinct = std::all_of(
          accepted.begin(), accepted.end(), [&](const Hmm* other) {
            return emission_distance(candidate, *other) >= settings.min_distance;
          });
      if (distinct) {
        auto [it, unused] = spec.generators.emplace(word, std::move(candidate));
        (void)unused;
        accepted.push_back(&it->second);
        placed = true;
        break;
      }
    }
    if (!placed) {
      raise(Errc::degenerate_input,
            "make_synth_spec: could not draw a generator for '" + word + "' at distance " +
                std::to_string(settings.min_distance) + " after " +
                std::to_string(kMaxAttempts) + " attempts; lower min_distance or enlarge "
                "the alphabet");
    }
  }
  return spec;
}

SynthCorpus synth_generate(const SynthSpec& spec) {
  if (spec.words.empty() || spec.instances < 1) {
    raise(Errc::invalid_argument, "synth_generate: need words and at least one instance");
  }
  if (spec.min_len < 1 || spec.max_len < spec.min_len) {
    raise(Errc::invalid_argument, "synth_generate: need 1 <= min_len <= max_len");
  }

  SynthCorpus corpus;
  corpus.alphabet_size = spec.alphabet_size;
  for (int instance = 0; instance < spec.instances; ++instance) {
    SynthVideo video;
    char id[32];
    std::snprintf(id, sizeof id, "synth_%04d", instance);
    video.video_id = id;

    for (const auto& word : spec.words) {
      // One stream per (word, instance) keeps every draw independent of the
      // order in which words and instances are generated.
      Rng rng(mix_seed(mix_seed(spec.seed, word), static_cast<std::uint64_t>(instance)));
      const int length = spec.min_len + rng.next_int(spec.max_len - spec.min_len + 1);
      std::vector<int> symbols =
          sample_sequence(spec.generators.at(word), length, rng.next_u64());
      for (int& s : symbols) {
        if (rng.next_double() < spec.noise) s = 1 + rng.next_int(spec.alphabet_size);
      }

      WordInterval interval;
      interval.word = word;
      interval.start_frame = static_cast<int>(video.symbols.size()) + 1;
      interval.end_frame = interval.start_frame + length - 1;
      video.symbols.insert(video.symbols.end(), symbols.begin(), symbols.end());
      video.transcript.intervals.push_back(std::move(interval));
    }
    video.transcript.video_id = video.video_id;
    video.transcript.total_frames = static_cast<int>(video.symbols.size());
    corpus.videos.push_back(std::move(video));
  }
  return corpus;
}

}  // namespace lipread

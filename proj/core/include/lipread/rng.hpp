#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace lipread {

// Deterministic PRNG used everywhere randomness is needed. The standard
// library distributions are implementation-defined, so draws are done by
// hand to keep outputs identical across compilers and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  // Uniform in [0, 1).
  double next_double();
  // Uniform in [0, bound). bound must be positive.
  int next_int(int bound);
  // Standard normal via Box-Muller (polar form).
  double next_gaussian();
  // Gamma(shape, 1) via Marsaglia-Tsang.
  double next_gamma(double shape);
  // Probability vector of length n from Dirichlet(alpha, ..., alpha).
  std::vector<double> dirichlet(int n, double alpha);
  // Index drawn from an (unnormalized is fine) weight vector by CDF walk.
  int discrete(std::span<const double> weights);

  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (int i = static_cast<int>(values.size()) - 1; i > 0; --i) {
      int j = next_int(i + 1);
      std::swap(values[i], values[j]);
    }
  }

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Stable seed derivation: mixes a base seed with a textual tag (FNV-1a) so
// independent workers ("per word", "per frame") get uncorrelated streams.
std::uint64_t mix_seed(std::uint64_t seed, std::string_view tag);
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace lipread

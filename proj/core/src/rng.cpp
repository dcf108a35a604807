#include "lipread/rng.hpp"

#include <cmath>

#include "lipread/error.hpp"

namespace lipread {

namespace {

// splitmix64, Vigna 2015. One multiply-xorshift pipeline per output.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : state_(seed) {
  // Warm up so that small consecutive seeds do not share low-entropy
  // initial outputs.
  splitmix64(state_);
  splitmix64(state_);
}

std::uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

int Rng::next_int(int bound) {
  if (bound <= 0) raise(Errc::invalid_argument, "next_int bound must be > 0");
  // Rejection sampling to avoid modulo bias.
  const std::uint64_t b = static_cast<std::uint64_t>(bound);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % b;
  std::uint64_t draw;
  do {
    draw = next_u64();
  } while (draw >= limit);
  return static_cast<int>(draw % b);
}

double Rng::next_gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * next_double() - 1.0;
    v = 2.0 * next_double() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * m;
  has_spare_ = true;
  return u * m;
}

double Rng::next_gamma(double shape) {
  if (shape <= 0.0) raise(Errc::invalid_argument, "gamma shape must be > 0");
  if (shape < 1.0) {
    // Boost to shape+1 and scale back.
    const double u = next_double();
    return next_gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = next_gaussian();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = next_double();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
      return d * v;
    }
  }
}

std::vector<double> Rng::dirichlet(int n, double alpha) {
  std::vector<double> out(static_cast<std::size_t>(n));
  double sum = 0.0;
  for (double& x : out) {
    x = next_gamma(alpha);
    sum += x;
  }
  if (sum <= 0.0) {
    // All draws underflowed; fall back to uniform.
    for (double& x : out) x = 1.0 / n;
    return out;
  }
  for (double& x : out) x /= sum;
  return out;
}

int Rng::discrete(std::span<const double> weights) {
  if (weights.empty()) raise(Errc::invalid_argument, "discrete: empty weights");
  double total = 0.0;
  for (double w : weights) total += w;
  if (total <= 0.0) raise(Errc::invalid_argument, "discrete: zero total weight");
  const double target = next_double() * total;
  double cum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    cum += weights[i];
    if (target < cum) return static_cast<int>(i);
  }
  return static_cast<int>(weights.size() - 1);
}

std::uint64_t mix_seed(std::uint64_t seed, std::string_view tag) {
  // FNV-1a over the tag bytes, folded into the seed.
  std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  std::uint64_t s = h;
  return splitmix64(s);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t s = seed ^ (salt * 0x9e3779b97f4a7c15ULL + 0x165667b19e3779f9ULL);
  return splitmix64(s);
}

}  // namespace lipread

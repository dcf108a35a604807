#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "lipread/rng.hpp"

using lipread::Rng;
using lipread::mix_seed;

TEST_SUITE("rng") {

TEST_CASE("same seed reproduces the stream") {
  Rng a(42), b(42);
  for (int i = 0; i < 64; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different seeds diverge") {
  Rng a(1), b(2);
  int equal = 0;
  for (int i = 0; i < 64; ++i) equal += a.next_u64() == b.next_u64() ? 1 : 0;
  CHECK(equal < 4);
}

TEST_CASE("next_double stays in [0,1) with a sane mean") {
  Rng rng(7);
  double sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double v = rng.next_double();
    REQUIRE(v >= 0.0);
    REQUIRE(v < 1.0);
    sum += v;
  }
  CHECK(std::abs(sum / n - 0.5) < 0.02);
}

TEST_CASE("next_int covers the range uniformly") {
  Rng rng(11);
  const int bound = 7, n = 14000;
  std::vector<int> counts(bound, 0);
  for (int i = 0; i < n; ++i) {
    const int v = rng.next_int(bound);
    REQUIRE(v >= 0);
    REQUIRE(v < bound);
    ++counts[v];
  }
  for (int c : counts) CHECK(std::abs(c - n / bound) < 300);
}

TEST_CASE("next_gaussian has standard moments") {
  Rng rng(13);
  const int n = 50000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = rng.next_gaussian();
    sum += v;
    sq += v * v;
  }
  const double mean = sum / n;
  CHECK(std::abs(mean) < 0.03);
  CHECK(std::abs(sq / n - mean * mean - 1.0) < 0.05);
}

TEST_CASE("next_gamma matches the shape-parameter mean") {
  for (double shape : {0.5, 1.0, 2.5}) {
    Rng rng(17);
    const int n = 20000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double v = rng.next_gamma(shape);
      REQUIRE(v >= 0.0);
      sum += v;
    }
    CHECK(std::abs(sum / n - shape) < 0.08 * std::max(1.0, shape));
  }
}

TEST_CASE("dirichlet rows are probability vectors") {
  Rng rng(19);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<double> row = rng.dirichlet(5, 0.5);
    REQUIRE(row.size() == 5);
    double sum = 0.0;
    for (double v : row) {
      REQUIRE(v >= 0.0);
      sum += v;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("discrete respects the weights and skips zeros") {
  Rng rng(23);
  const std::vector<double> weights = {1.0, 0.0, 3.0};
  const int n = 20000;
  std::vector<int> counts(3, 0);
  for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(rng.discrete(weights))];
  CHECK(counts[1] == 0);
  CHECK(std::abs(counts[0] / static_cast<double>(n) - 0.25) < 0.02);
  CHECK(std::abs(counts[2] / static_cast<double>(n) - 0.75) < 0.02);
}

TEST_CASE("shuffle permutes without loss and is seed-deterministic") {
  std::vector<int> v(40);
  std::iota(v.begin(), v.end(), 0);
  std::vector<int> w = v;
  Rng a(29), b(29);
  a.shuffle(v);
  b.shuffle(w);
  CHECK(v == w);
  std::sort(w.begin(), w.end());
  std::vector<int> expect(40);
  std::iota(expect.begin(), expect.end(), 0);
  CHECK(w == expect);
}

TEST_CASE("mix_seed separates streams by tag and salt") {
  CHECK(mix_seed(5, "word:bin") == mix_seed(5, "word:bin"));
  CHECK(mix_seed(5, "word:bin") != mix_seed(5, "word:blue"));
  CHECK(mix_seed(5, "x") != mix_seed(6, "x"));
  CHECK(mix_seed(5, std::uint64_t{0}) != mix_seed(5, std::uint64_t{1}));
}

}  // TEST_SUITE(rng)

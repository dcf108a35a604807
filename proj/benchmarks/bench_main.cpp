// Microbenchmarks for the hot paths: forward scoring, Baum-Welch training,
// chroma clustering, adaptive edge detection and the truncated SVD.
#include <benchmark/benchmark.h>

#include <vector>

#include "lipread/canny.hpp"
#include "lipread/classify.hpp"
#include "lipread/color.hpp"
#include "lipread/hmm.hpp"
#include "lipread/image.hpp"
#include "lipread/rng.hpp"
#include "lipread/segment.hpp"

namespace {

using namespace lipread;

std::vector<int> random_sequence(int length, int alphabet, Rng& rng) {
  std::vector<int> seq;
  seq.reserve(static_cast<std::size_t>(length));
  for (int t = 0; t < length; ++t) seq.push_back(1 + rng.next_int(alphabet));
  return seq;
}

void BM_ForwardLogLikelihood(benchmark::State& state) {
  const int t_len = static_cast<int>(state.range(0));
  Rng rng(1);
  const Hmm model = random_hmm(3, 11, rng);
  const std::vector<int> seq = random_sequence(t_len, 11, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward_log_likelihood(model, seq));
  }
  state.SetItemsProcessed(state.iterations() * t_len);
}
BENCHMARK(BM_ForwardLogLikelihood)->Arg(10)->Arg(50)->Arg(200);

void BM_BaumWelch(benchmark::State& state) {
  const int n_seqs = static_cast<int>(state.range(0));
  Rng rng(2);
  SequenceSet data;
  for (int i = 0; i < n_seqs; ++i) {
    data.sequences.push_back(random_sequence(16, 11, rng));
  }
  TrainConfig cfg;
  cfg.max_iters = 10;
  cfg.restarts = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(baum_welch(data, 3, 11, cfg).final_ll);
  }
  state.SetItemsProcessed(state.iterations() * n_seqs * 16);
}
BENCHMARK(BM_BaumWelch)->Arg(8)->Arg(32);

RasterFrame noisy_frame(int width, int height) {
  Rng rng(3);
  RasterFrame frame = RasterFrame::filled(width, height, 0, 0, 0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      // Three chroma groups so the clustering does real work.
      const int group = rng.next_int(3);
      const int r = group == 0 ? 210 : group == 1 ? 170 : 60;
      const int g = group == 0 ? 160 : group == 1 ? 60 : 60;
      const int b = group == 0 ? 140 : group == 1 ? 70 : 95;
      frame.set_pixel(x, y, static_cast<std::uint8_t>(r + rng.next_int(9) - 4),
                      static_cast<std::uint8_t>(g + rng.next_int(9) - 4),
                      static_cast<std::uint8_t>(b + rng.next_int(9) - 4));
    }
  }
  return frame;
}

void BM_KmeansAb(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const LabFrame lab = to_lab(noisy_frame(side, side * 3 / 4));
  for (auto _ : state) {
    benchmark::DoNotOptimize(kmeans_ab(lab, 3, 99).iterations);
  }
  state.SetItemsProcessed(state.iterations() * lab.width * lab.height);
}
BENCHMARK(BM_KmeansAb)->Arg(64)->Arg(128);

GrayFrame rect_frame(int width, int height, double contrast) {
  GrayFrame gray;
  gray.width = width;
  gray.height = height;
  gray.pixels.assign(static_cast<std::size_t>(width) * height, 0.0);
  for (int y = height / 4; y < 3 * height / 4; ++y) {
    for (int x = width / 4; x < 3 * width / 4; ++x) gray.at(x, y) = contrast;
  }
  return gray;
}

void BM_CannyAdaptive(benchmark::State& state) {
  // Arg 0: strong edges, no threshold lowering. Arg 1: low contrast, the
  // adaptive loop re-runs hysteresis several times.
  const double contrast = state.range(0) == 0 ? 1.0 : 0.02;
  const GrayFrame gray = rect_frame(96, 72, contrast);
  for (auto _ : state) {
    benchmark::DoNotOptimize(canny_adaptive(gray, 0.2, 40, 0.5, 8).edge_count);
  }
  state.SetItemsProcessed(state.iterations() * gray.width * gray.height);
}
BENCHMARK(BM_CannyAdaptive)->Arg(0)->Arg(1);

void BM_FitSvd(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  Rng rng(4);
  FeatureMatrix features;
  features.values.resize(dim, 800);
  for (Eigen::Index c = 0; c < features.values.cols(); ++c) {
    for (Eigen::Index r = 0; r < features.values.rows(); ++r) {
      features.values(r, c) = rng.next_gaussian();
    }
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_svd(features, 30).projection.rank);
  }
  state.SetItemsProcessed(state.iterations() * dim * 800);
}
BENCHMARK(BM_FitSvd)->Arg(128)->Arg(512);

}  // namespace

BENCHMARK_MAIN();

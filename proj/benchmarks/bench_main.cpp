#include <benchmark/benchmark.h>

#include <random>

#include "betaframe/distortion.hpp"
#include "betaframe/duals.hpp"
#include "betaframe/rng.hpp"

using namespace betaframe;

namespace {

std::vector<double> random_measurements(Index m, double mu, std::uint64_t seed) {
  auto engine = make_engine(seed);
  std::uniform_real_distribution<double> dist(-mu, mu);
  std::vector<double> y(m);
  for (double& v : y) v = dist(engine);
  return y;
}

void BM_GreedyQuantizeBeta(benchmark::State& state) {
  const Index m = static_cast<Index>(state.range(0));
  const TransferOperator h = TransferOperator::beta(1.5, m);
  const Alphabet a = make_alphabet(2, 2.0);
  const std::vector<double> y = random_measurements(m, 1.0, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(greedy_quantize(h, a, y, 1.0));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(m));
}
BENCHMARK(BM_GreedyQuantizeBeta)->Arg(64)->Arg(256)->Arg(1024);

void BM_BuildScheme(benchmark::State& state) {
  const Index m = static_cast<Index>(state.range(0));
  const Frame e = gaussian_frame(m, 4, 7);
  SchemeOptions options;
  options.mode = PartitionMode::Truncate;
  options.mu_policy = MuPolicy::GaussianFourSqrtM;
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_scheme(e, 4, 4, options));
  }
}
BENCHMARK(BM_BuildScheme)->Arg(64)->Arg(256);

void BM_EncodeDecode(benchmark::State& state) {
  const Index m = static_cast<Index>(state.range(0));
  const Frame e = hsc_frame(m);
  const BetaDualScheme s = build_scheme(e, 2, 4);
  const std::vector<double> x{0.6, -0.4};
  for (auto _ : state) {
    const QuantizationRecord rec = encode(s, x);
    benchmark::DoNotOptimize(decode(s, rec.q));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(m));
}
BENCHMARK(BM_EncodeDecode)->Arg(16)->Arg(64)->Arg(256);

void BM_SigmaMin(benchmark::State& state) {
  const Index m = static_cast<Index>(state.range(0));
  auto engine = make_engine(3);
  std::normal_distribution<double> normal(0.0, 1.0);
  DenseMatrix a(m, 8);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < 8; ++j) a(i, j) = normal(engine);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sigma_min(a));
  }
}
BENCHMARK(BM_SigmaMin)->Arg(64)->Arg(512);

void BM_NormInf2Exact(benchmark::State& state) {
  const Index m = static_cast<Index>(state.range(0));
  auto engine = make_engine(5);
  std::normal_distribution<double> normal(0.0, 1.0);
  DenseMatrix a(2, m);
  for (Index j = 0; j < m; ++j) {
    a(0, j) = normal(engine);
    a(1, j) = normal(engine);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(norm_inf_2_exact(a));
  }
}
BENCHMARK(BM_NormInf2Exact)->Arg(12)->Arg(18);

}  // namespace

BENCHMARK_MAIN();

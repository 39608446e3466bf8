#include <benchmark/benchmark.h>

#include "sprec/copula.hpp"
#include "sprec/normal.hpp"
#include "sprec/oracle.hpp"
#include "sprec/precedence.hpp"

namespace {

using namespace sprec;

void BM_NormalQuantile(benchmark::State& state) {
  double p = 1e-6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(normal_quantile(p));
    p = p < 0.999 ? p + 1e-3 : 1e-6;
  }
}
BENCHMARK(BM_NormalQuantile);

void BM_GaussianCopulaCdf(benchmark::State& state) {
  const Copula c = Copula::gaussian(0.7);
  double u = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(copula_cdf(c, u, 1 - u));
    u = u < 0.98 ? u + 0.013 : 0.01;
  }
}
BENCHMARK(BM_GaussianCopulaCdf);

void BM_EtaMonteCarlo(benchmark::State& state, Copula c) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto workers = static_cast<unsigned>(state.range(1));
  const Distribution g1 = Distribution::normal(0, 1), g2 = Distribution::exponential(1);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(eta_mc(c, g1, g2, n, seed++, workers).eta);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK_CAPTURE(BM_EtaMonteCarlo, shuffle, Copula::shuffle(0.3))->Args({1 << 20, 1})->Args({1 << 20, 4})->UseRealTime();
BENCHMARK_CAPTURE(BM_EtaMonteCarlo, gaussian, Copula::gaussian(0.5))->Args({1 << 20, 1})->Args({1 << 20, 4})->UseRealTime();
BENCHMARK_CAPTURE(BM_EtaMonteCarlo, mo_survival, Copula::mo_survival(0.4, 0.2))->Args({1 << 20, 1})->UseRealTime();

void BM_EtaQuadrature(benchmark::State& state, Copula c) {
  const Distribution g1 = Distribution::normal(0, 1), g2 = Distribution::normal(0.5, 2);
  const double tol = std::pow(10.0, -static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(eta_quadrature(c, g1, g2, tol).eta);
}
BENCHMARK_CAPTURE(BM_EtaQuadrature, order_statistics, Copula::order_statistics())->Arg(6)->Arg(9);
BENCHMARK_CAPTURE(BM_EtaQuadrature, gaussian, Copula::gaussian(0.5))->Arg(6)->Arg(9);

void BM_GridOracle(benchmark::State& state) {
  const Distribution u = Distribution::uniform(0, 1);
  const int grid = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(oracle::grid_eta_oracle(Copula::order_statistics(), u, u, grid).low);
}
BENCHMARK(BM_GridOracle)->Arg(128)->Arg(512);

}  // namespace

BENCHMARK_MAIN();

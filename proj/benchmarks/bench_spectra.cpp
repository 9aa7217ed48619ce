#include <benchmark/benchmark.h>

#include "trendrank/rng.hpp"
#include "trendrank/simulate.hpp"
#include "trendrank/spectra.hpp"

namespace {

trendrank::TimeSeriesPanel panel_for(int n, long t) {
  trendrank::DgpConfig config;
  config.n_dim = n;
  config.m_trends = n / 2;
  config.t_len = t;
  config.eta = 1.0;
  config.burn_in = 0;
  config.seed = 11;
  config.d_matrix_seed = 12;
  return trendrank::simulate_panel(config);
}

void BM_moment_matrices(benchmark::State& state) {
  const auto panel = panel_for(static_cast<int>(state.range(0)),
                               state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(trendrank::moment_matrices(panel));
  }
}

void BM_relative_spectrum(benchmark::State& state) {
  const auto mp = trendrank::moment_matrices(
      panel_for(static_cast<int>(state.range(0)), state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(trendrank::relative_spectrum(mp));
  }
}

}  // namespace

BENCHMARK(BM_moment_matrices)->Args({3, 200})->Args({5, 500})->Args({10, 1000});
BENCHMARK(BM_relative_spectrum)->Args({3, 200})->Args({5, 500})->Args({10, 1000});

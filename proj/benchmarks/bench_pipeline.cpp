#include <benchmark/benchmark.h>

#include "trendrank/rank.hpp"
#include "trendrank/rng.hpp"
#include "trendrank/simulate.hpp"
#include "trendrank/spectra.hpp"

namespace {

// One full replication: simulate, moments, spectrum, sequential rank search.
void BM_full_replication(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const long t = state.range(1);
  std::uint64_t rep = 0;
  for (auto _ : state) {
    trendrank::DgpConfig dgp;
    dgp.n_dim = n;
    dgp.m_trends = n / 2;
    dgp.t_len = t;
    dgp.eta = 1.0;
    dgp.burn_in = 0;
    dgp.seed = trendrank::derive_seed(21, {rep});
    dgp.d_matrix_seed = 22;
    trendrank::RandTestConfig config;
    config.seed = trendrank::derive_seed(23, {rep});
    ++rep;
    const auto spectrum = trendrank::relative_spectrum(
        trendrank::moment_matrices(trendrank::simulate_panel(dgp)));
    benchmark::DoNotOptimize(trendrank::estimate_bottom_up(
        spectrum, static_cast<double>(t), config, trendrank::LevelSchedule{}));
  }
}

}  // namespace

BENCHMARK(BM_full_replication)->Args({3, 100})->Args({3, 200})->Args({5, 200});

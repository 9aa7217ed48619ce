#include <benchmark/benchmark.h>

#include "trendrank/rng.hpp"
#include "trendrank/rtest.hpp"

namespace {

void BM_theta_big_finite(benchmark::State& state) {
  trendrank::RandTestConfig config;
  config.m_draws = static_cast<int>(state.range(0));
  std::uint64_t rep = 0;
  for (auto _ : state) {
    trendrank::RngStream stream(trendrank::derive_seed(5, {rep++}));
    benchmark::DoNotOptimize(trendrank::theta_big(config, 0.7, stream));
  }
}

void BM_theta_big_saturated(benchmark::State& state) {
  trendrank::RandTestConfig config;
  config.m_draws = static_cast<int>(state.range(0));
  std::uint64_t rep = 0;
  for (auto _ : state) {
    trendrank::RngStream stream(trendrank::derive_seed(6, {rep++}));
    benchmark::DoNotOptimize(trendrank::theta_big(config, 1e9, stream));
  }
}

void BM_strong_rule(benchmark::State& state) {
  trendrank::RandTestConfig config;
  config.m_draws = 100;
  config.s_reps = static_cast<int>(state.range(0));
  std::uint64_t root = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(trendrank::strong_rule(config, 0.7, root++));
  }
}

}  // namespace

BENCHMARK(BM_theta_big_finite)->Arg(100)->Arg(10000);
BENCHMARK(BM_theta_big_saturated)->Arg(100)->Arg(10000)->Arg(1000000);
BENCHMARK(BM_strong_rule)->Arg(100)->Arg(1000);

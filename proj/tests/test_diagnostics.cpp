#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "test_helpers.hpp"
#include "trendrank/diagnostics.hpp"

using namespace trendrank;

namespace {

std::vector<double> pareto_grid(int n, double eta) {
  // Deterministic sample with exact power-law order statistics.
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    x[static_cast<std::size_t>(i - 1)] =
        std::pow(static_cast<double>(i) / n, -1.0 / eta);
  }
  return x;
}

}  // namespace

TEST_CASE("hill estimator on an exact power-law grid") {
  const auto sample = pareto_grid(10000, 2.0);
  const auto est = hill_estimator(sample, 100);
  CHECK(est.eta_hat == doctest::Approx(2.04556127457346).epsilon(1e-10));
  CHECK(est.eta_hat > 1.8);
  CHECK(est.eta_hat < 2.2);
  CHECK(est.k_used == 100);
  CHECK(est.ci_low == doctest::Approx(est.eta_hat * (1.0 - 0.196)));
  CHECK(est.ci_high == doctest::Approx(est.eta_hat * (1.0 + 0.196)));
  CHECK(est.ci_low > 0.0);
  CHECK(est.ci_low < est.eta_hat);
  CHECK(est.eta_hat < est.ci_high);
}

TEST_CASE("degenerate tails are rejected") {
  std::vector<double> flat(50, 3.0);
  CHECK_ERROR_CODE(hill_estimator(flat, 10), "InsufficientTail");
  std::vector<double> zeros(50, 0.0);
  CHECK_ERROR_CODE(hill_estimator(zeros, 10), "InsufficientTail");
  std::vector<double> tiny = {1.0, 2.0, 3.0};
  CHECK_ERROR_CODE(hill_estimator(tiny, 5), "InsufficientTail");
  CHECK_ERROR_CODE(hill_estimator(tiny, 1), "InsufficientTail");
}

TEST_CASE("default order-statistic count follows sqrt(n)") {
  CHECK(default_hill_k(10000) == 100);
  CHECK(default_hill_k(10) == 3);
  CHECK(default_hill_k(1024) == 32);
}

TEST_CASE("hill estimate ignores scale") {
  const auto sample = pareto_grid(5000, 1.0);
  const auto base = hill_estimator(sample, 70);
  // Power-of-two scaling keeps every ratio bit exact.
  for (double c : {1024.0, 0.25}) {
    std::vector<double> scaled = sample;
    for (double& v : scaled) v *= c;
    CHECK(hill_estimator(scaled, 70).eta_hat == base.eta_hat);
  }
  std::vector<double> scaled = sample;
  for (double& v : scaled) v *= 3.0;
  CHECK(hill_estimator(scaled, 70).eta_hat ==
        doctest::Approx(base.eta_hat).epsilon(1e-12));
}

TEST_CASE("hill estimate ignores sample order and sign") {
  auto sample = pareto_grid(2000, 1.5);
  for (std::size_t i = 0; i < sample.size(); i += 3) sample[i] = -sample[i];
  auto shuffled = sample;
  std::mt19937_64 eng(4);
  std::shuffle(shuffled.begin(), shuffled.end(), eng);
  const auto a = hill_estimator(sample, 40);
  const auto b = hill_estimator(shuffled, 40);
  CHECK(a.eta_hat == b.eta_hat);
  CHECK(a.ci_low == b.ci_low);
}

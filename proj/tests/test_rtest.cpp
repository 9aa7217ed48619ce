#include <cmath>

#include "doctest.h"
#include "test_helpers.hpp"
#include "trendrank/rtest.hpp"
#include "trendrank/stats.hpp"

using namespace trendrank;

TEST_CASE("phi statistic basics") {
  CHECK(phi_statistic(0.0, 100.0, 1e-4) == 0.0);
  // T = 100, kappa = 1e-4, lambda = 100: 100 * exp(-1e-4 ln 100).
  CHECK(phi_statistic(100.0, 100.0, 1e-4) ==
        doctest::Approx(99.9539589003088).epsilon(1e-12));
  // kappa = 1, t_len = e: phi_log = 1/e, so phi = exp(1/e) - 1.
  const double l = phi_statistic(1.0, M_E, 1.0);
  CHECK(l == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(std::expm1(l) == doctest::Approx(0.444667861009766).epsilon(1e-12));
  CHECK_ERROR_CODE(phi_statistic(-0.1, 100.0, 1e-4), "NegativeEigenvalue");
  CHECK_ERROR_CODE(phi_statistic(1.0, 100.0, 0.0), "InvalidLevel");
  CHECK_ERROR_CODE(phi_statistic(1.0, 100.0, 1.5), "InvalidLevel");
}

TEST_CASE("node statistic hand cases") {
  std::vector<double> xi = {-0.5, 0.5, -1.0, 2.0};
  // phi = 0: indicators are I(0 <= u) for every draw.
  CHECK(theta_small(0.0, 1.0, xi) == doctest::Approx(2.0));    // sqrt(4)
  CHECK(theta_small(0.0, -1.0, xi) == doctest::Approx(-2.0));  // -sqrt(4)
  CHECK(theta_small(0.0, 0.0, xi) == doctest::Approx(2.0));
  // phi = 1 (phi_log = ln 2), u = 0: indicators I(xi <= 0) = (1,0,1,0).
  CHECK(theta_small(std::log(2.0), 0.0, xi) == doctest::Approx(0.0));
  // Saturated phi: same indicators as u -> 0 thresholds.
  CHECK(theta_small(1000.0, 1.0, xi) == doctest::Approx(0.0));
}

TEST_CASE("large finite phi behaves like the saturated branch") {
  // phi_log near 100 leaves phi finite (~e^100) but u/phi below any normal
  // draw, so indicators must match the saturated rule I(xi <= 0).
  std::vector<double> xi = {-2.0, -1e-6, 1e-6, 0.7, 1.3};
  CHECK(theta_small(99.9539589003088, 1.0, xi) ==
        theta_small(1e6, 1.0, xi));
  CHECK(theta_small(99.9539589003088, -1.0, xi) ==
        theta_small(1e6, -1.0, xi));
}

TEST_CASE("degenerate statistic at phi = 0 forces rejection") {
  RandTestConfig config;
  config.m_draws = 100;
  config.alpha = 0.05;
  RngStream stream(1);
  const auto result = theta_big(config, 0.0, stream);
  CHECK(result.theta_big == 100.0);  // exactly M under the two-point rule
  CHECK(result.c_alpha == doctest::Approx(3.84145882069412).epsilon(1e-10));
  CHECK(result.reject);
  // Weighted recombination of the node statistics reproduces the statistic.
  double recombined = 0.0;
  for (std::size_t s = 0; s < result.theta_by_node.size(); ++s) {
    recombined += config.quadrature.nodes[s].weight *
                  result.theta_by_node[s] * result.theta_by_node[s];
  }
  CHECK(std::abs(recombined - result.theta_big) <= 1e-12 * result.theta_big);
}

TEST_CASE("theta_big is deterministic in the seed") {
  RandTestConfig config;
  config.m_draws = 257;
  config.alpha = 0.01;
  for (double phi_log : {0.37, 1e3}) {
    RngStream a(99), b(99);
    const auto ra = theta_big(config, phi_log, a);
    const auto rb = theta_big(config, phi_log, b);
    CHECK(ra.theta_big == rb.theta_big);
    CHECK(ra.reject == rb.reject);
    CHECK(ra.theta_by_node == rb.theta_by_node);
  }
}

TEST_CASE("saturated statistic has unit mean") {
  RandTestConfig config;
  config.m_draws = 100;
  double sum = 0.0;
  const int reps = 10000;
  for (int r = 0; r < reps; ++r) {
    RngStream stream(derive_seed(7, {static_cast<std::uint64_t>(r)}));
    sum += theta_big(config, 1e9, stream).theta_big;
  }
  CHECK(sum / reps > 0.9);
  CHECK(sum / reps < 1.1);
}

TEST_CASE("null rejection frequency is calibrated") {
  RandTestConfig config;
  config.m_draws = 250000;  // large M keeps the binomial lattice negligible
  config.alpha = 0.05;
  const int reps = 20000;
  int rejections = 0;
  for (int r = 0; r < reps; ++r) {
    RngStream stream(derive_seed(11, {static_cast<std::uint64_t>(r)}));
    rejections += theta_big(config, 1e9, stream).reject ? 1 : 0;
  }
  const double freq = static_cast<double>(rejections) / reps;
  const double se = std::sqrt(0.05 * 0.95 / reps);
  CHECK(std::abs(freq - 0.05) <= 4.0 * se);
}

TEST_CASE("empirical law of the saturated statistic is chi-square(1)") {
  // At finite M the statistic lives on a binomial lattice whose atom at
  // zero already costs ~0.8/sqrt(M) of KS distance, so the M = 1e4 instance
  // sits near the 1% critical value; the larger M shows the convergence.
  const int reps = 10000;
  const double crit =
      kolmogorov_quantile(0.99) / std::sqrt(static_cast<double>(reps));
  for (int m_draws : {10000, 100000}) {
    RandTestConfig config;
    config.m_draws = m_draws;
    std::vector<double> sample;
    sample.reserve(reps);
    for (int r = 0; r < reps; ++r) {
      RngStream stream(derive_seed(15, {static_cast<std::uint64_t>(r)}));
      sample.push_back(theta_big(config, 1e9, stream).theta_big);
    }
    const double d = ks_statistic(std::move(sample), chi2_cdf_1df);
    CHECK(d < crit);
  }
}

TEST_CASE("tiny phi rejects with probability one at strict levels") {
  RandTestConfig config;
  config.m_draws = 100;
  config.alpha = 0.05 / 200.0;
  const double phi_log = std::log1p(1e-6);
  for (int r = 0; r < 10000; ++r) {
    RngStream stream(derive_seed(17, {static_cast<std::uint64_t>(r)}));
    CHECK(theta_big(config, phi_log, stream).reject);
  }
}

TEST_CASE("strong rule threshold values") {
  CHECK(strong_rule_threshold(10000, 0.05) ==
        doctest::Approx(0.9454).epsilon(1e-4));
  CHECK(strong_rule_threshold(10000, 0.05) ==
        doctest::Approx(0.945407276988485).epsilon(1e-12));
  CHECK(strong_rule_threshold(100, 0.05) ==
        doctest::Approx(0.9119).epsilon(1.2e-4));
  CHECK(strong_rule_threshold(100, 0.05) ==
        doctest::Approx(0.911910360404468).epsilon(1e-12));
  // The iterated log truncates at zero, so S = 2 collapses to 1 - alpha.
  CHECK(strong_rule_threshold(2, 0.05) == 0.95);
  // The correction vanishes as S grows.
  CHECK(strong_rule_threshold(1000000000000LL, 0.05) ==
        doctest::Approx(0.95).epsilon(1e-5));
  CHECK_ERROR_CODE(strong_rule_threshold(1, 0.05), "InvalidLevel");
}

TEST_CASE("strong rule decides both hypotheses deterministically") {
  RandTestConfig config;
  config.m_draws = 100;
  config.alpha = 0.05;
  config.s_reps = 1000;

  // Saturated phi: the null holds, the acceptance fraction hovers at
  // 1 - alpha, above the LIL threshold.
  auto null_result = strong_rule(config, 1e9, 123);
  CHECK(null_result.q_strong.has_value());
  CHECK(*null_result.strong_threshold ==
        doctest::Approx(strong_rule_threshold(1000, 0.05)).epsilon(1e-12));
  CHECK(*null_result.q_strong >= *null_result.strong_threshold);
  CHECK(!null_result.reject);

  // phi = 0: every repetition rejects, Q = 0.
  auto alt_result = strong_rule(config, 0.0, 123);
  CHECK(*alt_result.q_strong == 0.0);
  CHECK(alt_result.reject);
}

TEST_CASE("strong rule is deterministic and order-independent") {
  RandTestConfig config;
  config.s_reps = 50;
  const auto a = strong_rule(config, 2.0, 31);
  const auto b = strong_rule(config, 2.0, 31);
  CHECK(a.q_strong == b.q_strong);
  CHECK(a.reject == b.reject);
}

TEST_CASE("config validation") {
  RandTestConfig config;
  config.kappa = 0.0;
  CHECK_ERROR_CODE(config.validate(), "InvalidLevel");
  config = RandTestConfig{};
  config.m_draws = 0;
  CHECK_ERROR_CODE(config.validate(), "InvalidLevel");
  config = RandTestConfig{};
  config.alpha = 1.0;
  CHECK_ERROR_CODE(config.validate(), "InvalidLevel");
}

#include <Eigen/SVD>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "test_helpers.hpp"
#include "trendrank/simulate.hpp"
#include "trendrank/spectra.hpp"
#include "trendrank/trends.hpp"

using namespace trendrank;

namespace {

TrendDecomposition decompose(const TimeSeriesPanel& panel, int m) {
  return pc_decompose(panel, m, moment_matrices(panel));
}

// Orthonormal basis of the unit-eigenvalue space of A (the directions in
// which the process accumulates).
Eigen::MatrixXd trend_basis(const Eigen::MatrixXd& a, int m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  return es.eigenvectors().rightCols(m);
}

}  // namespace

TEST_CASE("noise-free one-factor panel is recovered exactly") {
  Eigen::Vector3d p(1.0, 2.0, 2.0);
  p /= 3.0;
  const int t_len = 60;
  Eigen::RowVectorXd x(t_len);
  std::mt19937_64 eng(3);
  double level = 0.0;
  for (int t = 0; t < t_len; ++t) {
    level += testutil::rnorm(eng);
    x(t) = level;
  }
  const auto panel = make_panel(p * x);
  const auto dec = decompose(panel, 1);
  CHECK((dec.loadings - p).cwiseAbs().maxCoeff() < 1e-10);  // p is positive
  CHECK(dec.residuals.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("full-dimension decomposition has no residual") {
  const auto panel = testutil::random_walk_panel(4, 50, 8);
  const auto dec = decompose(panel, 4);
  CHECK(dec.residuals.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("loadings are orthonormal and reconstruction is exact") {
  const auto panel = testutil::random_walk_panel(5, 90, 44);
  const auto dec = decompose(panel, 3);
  const Eigen::MatrixXd gram =
      dec.loadings.transpose() * dec.loadings - Eigen::MatrixXd::Identity(3, 3);
  CHECK(gram.cwiseAbs().maxCoeff() <= 1e-10);
  const Eigen::MatrixXd rebuilt = dec.loadings * dec.trends + dec.residuals;
  CHECK((rebuilt - panel.values).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("decomposition is deterministic") {
  const auto panel = testutil::random_walk_panel(4, 70, 15);
  const auto a = decompose(panel, 2);
  const auto b = decompose(panel, 2);
  CHECK(a.loadings == b.loadings);
  CHECK(a.trends == b.trends);
}

TEST_CASE("m bounds are enforced") {
  const auto panel = testutil::random_walk_panel(3, 30, 2);
  const auto mp = moment_matrices(panel);
  CHECK_ERROR_CODE(pc_decompose(panel, 0, mp), "InvalidM");
  CHECK_ERROR_CODE(pc_decompose(panel, 4, mp), "InvalidM");
}

TEST_CASE("identification with an identity block is a fixed point") {
  TrendDecomposition dec;
  dec.loadings = Eigen::MatrixXd(3, 2);
  dec.loadings << 1.0, 0.0, 0.0, 1.0, 0.4, -0.3;
  dec.trends = Eigen::MatrixXd::Random(2, 20);
  dec.residuals = Eigen::MatrixXd::Zero(3, 20);
  dec.rotation = Eigen::MatrixXd::Identity(2, 2);
  dec.ordering = {0, 1, 2};
  dec.series_names = {"a", "b", "c"};
  const auto out = identify(dec, {0, 1, 2});
  CHECK((out.loadings - dec.loadings).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((out.trends - dec.trends).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(out.identified);
}

TEST_CASE("hand-worked single-trend identification") {
  TrendDecomposition dec;
  dec.loadings = Eigen::MatrixXd(3, 1);
  dec.loadings << 0.5, 0.5, 0.707;
  dec.trends = Eigen::MatrixXd::Ones(1, 5);
  dec.residuals = Eigen::MatrixXd::Zero(3, 5);
  dec.rotation = Eigen::MatrixXd::Identity(1, 1);
  dec.ordering = {0, 1, 2};
  dec.series_names = {"s1", "s2", "s3"};
  const auto out = identify(dec, {2, 0, 1});  // series 3 leads
  CHECK(out.loadings(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(out.loadings(1, 0) == doctest::Approx(0.5 / 0.707).epsilon(1e-12));
  CHECK(out.loadings(2, 0) == doctest::Approx(0.5 / 0.707).epsilon(1e-12));
  CHECK(out.series_names[0] == "s3");
  CHECK(out.trends(0, 0) == doctest::Approx(0.707).epsilon(1e-12));
}

TEST_CASE("identification preserves the fitted values") {
  const auto panel = testutil::random_walk_panel(5, 80, 23);
  const auto dec = decompose(panel, 2);
  const std::vector<int> ordering = {3, 1, 4, 0, 2};
  const auto out = identify(dec, ordering);
  const Eigen::MatrixXd before = dec.loadings * dec.trends;
  const Eigen::MatrixXd after = out.loadings * out.trends;
  for (std::size_t i = 0; i < ordering.size(); ++i) {
    const Eigen::Index src = ordering[i];
    CHECK((after.row(static_cast<Eigen::Index>(i)) - before.row(src))
              .cwiseAbs()
              .maxCoeff() <= 1e-10);
  }
  // Leading block is the identity.
  CHECK((out.loadings.topRows(2) - Eigen::MatrixXd::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() <= 1e-10);
}

TEST_CASE("singular leading block is reported") {
  TrendDecomposition dec;
  dec.loadings = Eigen::MatrixXd(3, 1);
  dec.loadings << 0.0, 0.6, 0.8;
  dec.trends = Eigen::MatrixXd::Ones(1, 4);
  dec.residuals = Eigen::MatrixXd::Zero(3, 4);
  dec.rotation = Eigen::MatrixXd::Identity(1, 1);
  dec.ordering = {0, 1, 2};
  dec.series_names = {"a", "b", "c"};
  CHECK_ERROR_CODE(identify(dec, {0, 1, 2}), "SingularBlock");
  CHECK_ERROR_CODE(identify(dec, {0, 1}), "InvalidM");
  CHECK_ERROR_CODE(identify(dec, {0, 1, 1}), "InvalidM");
}

TEST_CASE("projection onto the fitted panel spans the same space") {
  const auto panel = testutil::random_walk_panel(5, 100, 31);
  const auto dec = decompose(panel, 2);
  const auto reduced = make_panel(dec.loadings * dec.trends);
  const auto dec2 = decompose(reduced, 2);
  // Principal angles via the singular values of P1' P2.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(dec.loadings.transpose() *
                                        dec2.loadings);
  CHECK(svd.singularValues().minCoeff() >= 1.0 - 1e-8);
}

TEST_CASE("loading error shrinks with the sample") {
  const int reps = 50;
  auto median_error = [&](long t_len) {
    std::vector<double> errors;
    for (int r = 0; r < reps; ++r) {
      DgpConfig dgp;
      dgp.n_dim = 4;
      dgp.m_trends = 2;
      dgp.t_len = t_len;
      dgp.eta = 1.0;
      dgp.burn_in = 0;
      dgp.seed = derive_seed(777, {static_cast<std::uint64_t>(r),
                                   static_cast<std::uint64_t>(t_len)});
      dgp.d_matrix_seed = 778;
      const auto panel = simulate_panel(dgp);
      const auto dec = pc_decompose(panel, 2, moment_matrices(panel));
      const Eigen::MatrixXd q =
          trend_basis(make_A(4, 2, dgp.d_matrix_seed), 2);
      // Least-squares rotation of the true basis onto the estimate.
      const Eigen::MatrixXd h = q.transpose() * dec.loadings;
      errors.push_back((dec.loadings - q * h).norm());
    }
    return testutil::median(errors);
  };
  const double at_200 = median_error(200);
  const double at_800 = median_error(800);
  CHECK(at_800 <= at_200 / 1.3);
}

TEST_CASE("estimated trends dominate their extraction error") {
  const int reps = 50;
  auto error_ratio = [&](long t_len) {
    std::vector<double> errors, signals;
    for (int r = 0; r < reps; ++r) {
      DgpConfig dgp;
      dgp.n_dim = 3;
      dgp.m_trends = 1;
      dgp.t_len = t_len;
      dgp.eta = 1.0;
      dgp.burn_in = 0;
      dgp.seed = derive_seed(888, {static_cast<std::uint64_t>(r),
                                   static_cast<std::uint64_t>(t_len)});
      dgp.d_matrix_seed = 889;
      const auto panel = simulate_panel(dgp);
      const auto dec = pc_decompose(panel, 1, moment_matrices(panel));
      const Eigen::MatrixXd q =
          trend_basis(make_A(3, 1, dgp.d_matrix_seed), 1);
      const Eigen::MatrixXd x_true = q.transpose() * panel.values;
      // Fit x_hat ~ B x_true by least squares and take the residual at t = T.
      const Eigen::MatrixXd b = (dec.trends * x_true.transpose()) *
                                (x_true * x_true.transpose()).inverse();
      const Eigen::Index last = panel.t() - 1;
      errors.push_back((dec.trends.col(last) - b * x_true.col(last)).norm());
      signals.push_back(x_true.col(last).norm());
    }
    return testutil::median(errors) / testutil::median(signals);
  };
  CHECK(error_ratio(800) < error_ratio(200));
}

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trendrank/panel.hpp"
#include "trendrank/rng.hpp"

namespace trendrank {

/// Deterministic scale profile h(r), r in [0, 1], multiplying innovations at
/// generation time. PiecewiseSteps holds (breakpoint, level) pairs with
/// strictly increasing breakpoints ending at 1; level k applies on
/// [previous breakpoint, breakpoint_k). Polynomial evaluates
/// sum_k coeffs[k] r^k and must stay nonnegative on [0, 1].
struct ScaleFunction {
  enum class Kind { None, PiecewiseSteps, Polynomial };

  Kind kind = Kind::None;
  std::vector<std::pair<double, double>> steps;  // (breakpoint, level)
  std::vector<double> coeffs;

  static ScaleFunction none();
  static ScaleFunction piecewise(std::vector<std::pair<double, double>> steps);
  static ScaleFunction polynomial(std::vector<double> coeffs);

  double operator()(double r) const;
  std::string label() const;
};

/// VAR(1) design y_t = A y_{t-1} + eps_t with A = I - PP', P an orthonormal
/// N x (N-m) matrix, so exactly m unit-root directions survive.
struct DgpConfig {
  int n_dim = 1;
  int m_trends = 0;
  long t_len = 100;
  /// Tail index of the power-law innovations; nullopt draws standard
  /// normals instead.
  std::optional<double> eta = 1.0;
  /// AR(1) coefficient applied to the innovations, in (-1, 1).
  double ar_theta = 0.0;
  ScaleFunction scale = ScaleFunction::none();
  /// Presample length discarded before the returned window. Zero keeps the
  /// y_0 = 0 initialisation itself.
  long burn_in = 1000;
  std::uint64_t seed = 0;
  /// Seed for the projection design D, separate from `seed` so D stays
  /// fixed while replications vary.
  std::uint64_t d_matrix_seed = 0;

  void validate() const;
};

/// A = I - PP' with P = D (D'D)^{-1/2} (Cholesky root), D = ones + standard
/// normal entries drawn from d_matrix_seed. A is symmetric idempotent with
/// m unit and N-m zero eigenvalues. The vanishingly unlikely singular D'D is
/// retried on the next substream; persistent failure throws
/// Error("RankDeficientD").
Eigen::MatrixXd make_A(int n_dim, int m_trends, std::uint64_t d_matrix_seed);

/// N x t_len innovation matrix: power-law draws (1 - v)^{-1/eta} centered by
/// the exact mean eta/(eta-1) when eta > 1 and by the per-series sample mean
/// when eta <= 1 (where no population mean exists); Gaussian draws when eta
/// is unset. The AR(1) filter runs afterwards from a zero initial state, and
/// the scale profile multiplies column t by h(t/T).
Eigen::MatrixXd draw_innovations(const DgpConfig& config, RngStream& rng);

/// Iterates the VAR from y_0 = 0 over burn_in + t_len steps and returns the
/// last t_len columns as a panel named s1..sN. The scale profile argument is
/// r = (t - burn_in)/t_len clamped to [0, 1], so the returned window spans
/// h on (0, 1] and the presample uses h(0).
TimeSeriesPanel simulate_panel(const DgpConfig& config);

}  // namespace trendrank

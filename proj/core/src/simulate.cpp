#include "trendrank/simulate.hpp"

#include <cmath>
#include <cstdio>

#include "trendrank/errors.hpp"

namespace trendrank {

ScaleFunction ScaleFunction::none() { return ScaleFunction{}; }

ScaleFunction ScaleFunction::piecewise(
    std::vector<std::pair<double, double>> steps) {
  if (steps.empty()) {
    throw input_error("InvalidScale", "piecewise scale needs at least one step");
  }
  double prev = 0.0;
  for (const auto& [breakpoint, level] : steps) {
    if (!(breakpoint > prev && breakpoint <= 1.0)) {
      throw input_error("InvalidScale",
                        "breakpoints must increase within (0, 1]");
    }
    if (!(level > 0.0)) {
      throw input_error("InvalidScale", "levels must be positive");
    }
    prev = breakpoint;
  }
  if (steps.back().first != 1.0) {
    throw input_error("InvalidScale", "last breakpoint must be 1");
  }
  ScaleFunction f;
  f.kind = Kind::PiecewiseSteps;
  f.steps = std::move(steps);
  return f;
}

ScaleFunction ScaleFunction::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) {
    throw input_error("InvalidScale", "polynomial scale needs coefficients");
  }
  ScaleFunction f;
  f.kind = Kind::Polynomial;
  f.coeffs = std::move(coeffs);
  // Nonnegativity on [0,1] is required; checked on a grid here and again at
  // every evaluation.
  for (int i = 0; i <= 100; ++i) {
    if (f(i / 100.0) < 0.0) {
      throw input_error("InvalidScale",
                        "polynomial scale is negative on [0, 1]");
    }
  }
  return f;
}

double ScaleFunction::operator()(double r) const {
  r = std::min(std::max(r, 0.0), 1.0);
  switch (kind) {
    case Kind::None:
      return 1.0;
    case Kind::PiecewiseSteps:
      for (const auto& [breakpoint, level] : steps) {
        if (r < breakpoint) return level;
      }
      return steps.back().second;  // r == 1
    case Kind::Polynomial: {
      double value = 0.0;
      for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        value = value * r + *it;
      }
      if (value < 0.0) {
        throw input_error("InvalidScale",
                          "polynomial scale is negative at r=" +
                              std::to_string(r));
      }
      return value;
    }
  }
  return 1.0;
}

std::string ScaleFunction::label() const {
  char buf[64];
  std::string out;
  switch (kind) {
    case Kind::None:
      return "none";
    case Kind::PiecewiseSteps:
      out = "steps:";
      for (std::size_t i = 0; i < steps.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%g:%g", steps[i].first,
                      steps[i].second);
        if (i > 0) out += ",";
        out += buf;
      }
      return out;
    case Kind::Polynomial:
      out = "poly:";
      for (std::size_t i = 0; i < coeffs.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%g", coeffs[i]);
        if (i > 0) out += ",";
        out += buf;
      }
      return out;
  }
  return "none";
}

void DgpConfig::validate() const {
  if (n_dim < 1) throw input_error("InvalidM", "n_dim must be >= 1");
  if (m_trends < 0 || m_trends > n_dim) {
    throw input_error("InvalidM", "m_trends must be in [0, n_dim]");
  }
  if (t_len < 3) throw input_error("TooShort", "t_len must be >= 3");
  if (eta.has_value() && !(*eta > 0.0)) {
    throw input_error("InvalidLevel", "eta must be positive");
  }
  if (!(ar_theta > -1.0 && ar_theta < 1.0)) {
    throw input_error("InvalidLevel", "ar_theta must be in (-1, 1)");
  }
  if (burn_in < 0) throw input_error("InvalidLevel", "burn_in must be >= 0");
}

Eigen::MatrixXd make_A(int n_dim, int m_trends, std::uint64_t d_matrix_seed) {
  if (n_dim < 1 || m_trends < 0 || m_trends > n_dim) {
    throw input_error("InvalidM", "need 0 <= m_trends <= n_dim");
  }
  const int cols = n_dim - m_trends;
  if (cols == 0) return Eigen::MatrixXd::Identity(n_dim, n_dim);

  for (std::uint64_t attempt = 0; attempt < 32; ++attempt) {
    RngStream rng(derive_seed(d_matrix_seed, {stream::kDesignMatrix, attempt}));
    Eigen::MatrixXd d(n_dim, cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
      for (Eigen::Index r = 0; r < n_dim; ++r) d(r, c) = 1.0 + rng.normal();
    }
    const Eigen::MatrixXd gram = d.transpose() * d;
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) continue;
    // P = D (D'D)^{-1/2} with the Cholesky root: solve P U = D for U = L'.
    const Eigen::MatrixXd p = llt.matrixU().solve<Eigen::OnTheRight>(d);
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n_dim, n_dim);
    a.selfadjointView<Eigen::Lower>().rankUpdate(p, -1.0);
    a = a.selfadjointView<Eigen::Lower>();
    return a;
  }
  throw numerical_error("RankDeficientD",
                        "could not draw a full-rank design matrix");
}

namespace {

Eigen::MatrixXd draw_innovations_window(const DgpConfig& config,
                                        RngStream& rng, long t_total,
                                        long burn_offset) {
  const int n = config.n_dim;
  Eigen::MatrixXd eps(n, t_total);

  if (config.eta.has_value()) {
    const double inv_eta = 1.0 / *config.eta;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index t = 0; t < t_total; ++t) {
        eps(i, t) = std::pow(1.0 - rng.uniform01_halfopen(), -inv_eta);
      }
    }
    if (*config.eta > 1.0) {
      eps.array() -= *config.eta / (*config.eta - 1.0);
    } else {
      eps.colwise() -= eps.rowwise().mean();
    }
  } else {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index t = 0; t < t_total; ++t) eps(i, t) = rng.normal();
    }
  }

  if (config.ar_theta != 0.0) {
    for (Eigen::Index t = 1; t < t_total; ++t) {
      eps.col(t) += config.ar_theta * eps.col(t - 1);
    }
  }

  if (config.scale.kind != ScaleFunction::Kind::None) {
    for (Eigen::Index t = 0; t < t_total; ++t) {
      const double r = static_cast<double>(t + 1 - burn_offset) /
                       static_cast<double>(config.t_len);
      eps.col(t) *= config.scale(r);
    }
  }
  return eps;
}

}  // namespace

Eigen::MatrixXd draw_innovations(const DgpConfig& config, RngStream& rng) {
  config.validate();
  return draw_innovations_window(config, rng, config.t_len, 0);
}

TimeSeriesPanel simulate_panel(const DgpConfig& config) {
  config.validate();
  const Eigen::MatrixXd a =
      make_A(config.n_dim, config.m_trends, config.d_matrix_seed);

  RngStream rng(derive_seed(config.seed, {stream::kInnovations}));
  const long t_total = config.burn_in + config.t_len;
  const Eigen::MatrixXd eps =
      draw_innovations_window(config, rng, t_total, config.burn_in);

  Eigen::MatrixXd path(config.n_dim, t_total);
  Eigen::VectorXd state = Eigen::VectorXd::Zero(config.n_dim);
  for (Eigen::Index t = 0; t < t_total; ++t) {
    state = a * state + eps.col(t);
    path.col(t) = state;
  }
  return make_panel(path.rightCols(config.t_len));
}

}  // namespace trendrank

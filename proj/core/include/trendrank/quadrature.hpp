#pragma once

#include <string>
#include <vector>

namespace trendrank {

/// Nodes and weights of the n-point Gauss-Hermite rule for weight exp(-z^2),
/// i.e. sum_s w_s f(z_s) ~ integral f(z) exp(-z^2) dz. Newton iteration on
/// the Hermite recurrence; weights sum to sqrt(pi).
void gauss_hermite(int n, std::vector<double>& nodes,
                   std::vector<double>& weights);

struct QuadratureNode {
  double u = 0.0;
  double weight = 0.0;
};

enum class QuadratureKind { GH2, GH4, Explicit };

/// Weight function for averaging the indicator statistics across thresholds
/// u. Weights always sum to one, so they form a probability measure with a
/// finite second moment on a finite grid.
///
/// GH2/GH4 place nodes at u = sqrt(2) * z_s with normalised weights
/// w_s / sqrt(pi), which integrates against the standard normal; GH2 reduces
/// to u = +-1 with weight 1/2 each.
struct QuadratureSpec {
  QuadratureKind kind = QuadratureKind::GH2;
  std::vector<QuadratureNode> nodes;

  static QuadratureSpec gh2();
  static QuadratureSpec gh4();
  /// Validates that weights are nonnegative, finite and sum to 1 (1e-9).
  static QuadratureSpec explicit_grid(std::vector<QuadratureNode> nodes);

  std::string name() const;
};

}  // namespace trendrank

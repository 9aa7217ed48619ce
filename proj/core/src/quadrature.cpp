#include "trendrank/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "trendrank/errors.hpp"

namespace trendrank {

void gauss_hermite(int n, std::vector<double>& nodes,
                   std::vector<double>& weights) {
  if (n < 1) throw input_error("InvalidQuadrature", "order must be >= 1");
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);

  const double pim4 = 0.7511255444649425;  // pi^{-1/4}
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    // Standard initial guesses for the largest roots, then spacing.
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) -
          1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * nodes[1];
    } else {
      z = 2.0 * z - nodes[static_cast<std::size_t>(i - 2)];
    }
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // Orthonormal Hermite recurrence up to degree n.
      double p1 = pim4;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 -
             std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z_old = z;
      z = z_old - p1 / pp;
      if (std::abs(z - z_old) <= 1e-14) break;
    }
    nodes[static_cast<std::size_t>(i)] = z;
    nodes[static_cast<std::size_t>(n - 1 - i)] = -z;
    weights[static_cast<std::size_t>(i)] = 2.0 / (pp * pp);
    weights[static_cast<std::size_t>(n - 1 - i)] =
        weights[static_cast<std::size_t>(i)];
  }
  if (n % 2 == 1) nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  // The recurrence fills from the largest root down; report ascending.
  std::reverse(nodes.begin(), nodes.end());
  std::reverse(weights.begin(), weights.end());
}

QuadratureSpec QuadratureSpec::gh2() {
  // Exact closed form of the two-point rule.
  QuadratureSpec spec;
  spec.kind = QuadratureKind::GH2;
  spec.nodes = {{-1.0, 0.5}, {1.0, 0.5}};
  return spec;
}

QuadratureSpec QuadratureSpec::gh4() {
  std::vector<double> z, w;
  gauss_hermite(4, z, w);
  QuadratureSpec spec;
  spec.kind = QuadratureKind::GH4;
  const double root_pi = std::sqrt(M_PI);
  for (std::size_t s = 0; s < z.size(); ++s) {
    spec.nodes.push_back({std::sqrt(2.0) * z[s], w[s] / root_pi});
  }
  return spec;
}

QuadratureSpec QuadratureSpec::explicit_grid(std::vector<QuadratureNode> nodes) {
  if (nodes.empty()) {
    throw input_error("InvalidQuadrature", "empty quadrature grid");
  }
  double total = 0.0;
  for (const auto& node : nodes) {
    if (!std::isfinite(node.u) || !std::isfinite(node.weight) ||
        node.weight < 0.0) {
      throw input_error("InvalidQuadrature",
                        "grid nodes must be finite with nonnegative weights");
    }
    total += node.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", total);
    throw input_error("InvalidQuadrature",
                      std::string("grid weights must sum to 1, got ") + buf);
  }
  QuadratureSpec spec;
  spec.kind = QuadratureKind::Explicit;
  spec.nodes = std::move(nodes);
  return spec;
}

std::string QuadratureSpec::name() const {
  switch (kind) {
    case QuadratureKind::GH2:
      return "gh2";
    case QuadratureKind::GH4:
      return "gh4";
    case QuadratureKind::Explicit:
      return "explicit";
  }
  return "unknown";
}

}  // namespace trendrank

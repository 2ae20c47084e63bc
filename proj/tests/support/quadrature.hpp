// Gauss-Legendre quadrature for the deterministic integration oracles.
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace testsupport {

struct GaussLegendre {
  std::vector<double> nodes;    // on (-1, 1)
  std::vector<double> weights;
};

// Nodes via Newton iteration on the Legendre polynomial roots.
inline GaussLegendre gauss_legendre(int n) {
  GaussLegendre rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return rule;
}

template <typename F>
double integrate(F&& f, double a, double b, const GaussLegendre& rule) {
  const double mid = 0.5 * (a + b);
  const double halfwidth = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    sum += rule.weights[k] * f(mid + halfwidth * rule.nodes[k]);
  }
  return sum * halfwidth;
}

}  // namespace testsupport

#pragma once

#include <cmath>
#include <vector>

namespace lcgeo {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;  // sum to 2
};

/// Gauss-Legendre nodes/weights by Newton iteration on P_n; cached per order.
inline const GaussRule& gauss_legendre(int order) {
  static thread_local std::vector<GaussRule> cache(65);
  if (order < 1) order = 1;
  if (order > 64) order = 64;
  GaussRule& r = cache[static_cast<size_t>(order)];
  if (!r.nodes.empty()) return r;
  r.nodes.resize(static_cast<size_t>(order));
  r.weights.resize(static_cast<size_t>(order));
  const int n = order;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.nodes[static_cast<size_t>(i)] = -x;
    r.nodes[static_cast<size_t>(n - 1 - i)] = x;
    r.weights[static_cast<size_t>(i)] = 2.0 / ((1.0 - x * x) * pp * pp);
    r.weights[static_cast<size_t>(n - 1 - i)] = r.weights[static_cast<size_t>(i)];
  }
  return r;
}

}  // namespace lcgeo

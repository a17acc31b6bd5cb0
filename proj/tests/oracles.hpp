#pragma once

// Test-side brute-force oracles; deliberately independent of the library's
// computation paths.

#include <cmath>
#include <functional>

namespace oracles {

inline constexpr double kSqrt2Pi = 2.506628274631000502;
inline constexpr double kSqrtPi = 1.772453850905516027;

// sup_y f(y) g(x - y) over a fine 1D grid
inline double sup_convolve_1d(const std::function<double(double)>& f,
                              const std::function<double(double)>& g, double x, double lo,
                              double hi, int n = 200000) {
  double best = 0;
  for (int i = 0; i <= n; ++i) {
    double y = lo + (hi - lo) * i / n;
    best = std::max(best, f(y) * g(x - y));
  }
  return best;
}

// sup_x (y x - phi(x)) over a dense sample of [lo, hi]
inline double legendre_1d(const std::function<double(double)>& phi, double y, double lo, double hi,
                          int n = 200000) {
  double best = -1e300;
  for (int i = 0; i <= n; ++i) {
    double x = lo + (hi - lo) * i / n;
    double v = phi(x);
    if (v < 1e299) best = std::max(best, y * x - v);
  }
  return best;
}

// composite Simpson
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 8192) {
  double h = (b - a) / n, s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3;
}

}  // namespace oracles

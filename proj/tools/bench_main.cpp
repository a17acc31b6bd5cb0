// Compares the serial reference kernels against the OpenMP path on the
// hot loops: grid TV sweeps, quadrature sums and discrete conjugation.
#include <chrono>
#include <cstdio>

#include "lcgeo/transform.hpp"
#include "lcgeo/tv.hpp"
#include "lcgeo/variation.hpp"

using namespace lcgeo;
using kernels::Exec;

namespace {

double now() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

template <class F>
void bench(const char* name, F&& body) {
  kernels::set_default_exec(Exec::serial);
  double t0 = now();
  double serial_val = body();
  double serial_time = now() - t0;

  kernels::set_default_exec(Exec::parallel);
  t0 = now();
  double parallel_val = body();
  double parallel_time = now() - t0;

  std::printf("%-26s serial %8.3fs   parallel %8.3fs   speedup %5.2fx   %s\n", name, serial_time,
              parallel_time, serial_time / parallel_time,
              serial_val == parallel_val ? "bit-identical" : "MISMATCH");
}

}  // namespace

int main() {
  std::printf("threads available: %d\n", kernels::max_threads());

  LogConcaveFn laplace2 = exponential_norm(2, 1, 1);
  Vec lo{-10, -10}, hi{10, 10};
  GridField field = sample_field(laplace2, lo, hi, 1024);
  ConvexBody square = make_box(Vec{-1, -1}, Vec{1, 1});
  bench("tv_grid 1024^2", [&] { return tv_grid(field, square, kernels::default_exec()); });

  LogConcaveFn gauss2 = standard_gaussian(2);
  QuadratureSpec heavy;
  heavy.panels = 32;
  heavy.order = 24;
  bench("integrate gaussian 2d", [&] { return integrate(gauss2, heavy); });

  bench("moment measure 2d", [&] {
    QuadratureSpec spec;
    spec.panels = 24;
    spec.order = 24;
    return moment_measure(gauss2, spec).total_mass();
  });

  // discrete conjugation of a 2D grid potential
  GridSpec gs = GridSpec::over(Vec{-6, -6}, Vec{6, 6}, {513, 513, 1});
  std::vector<double> vals(gs.size());
  for (size_t k = 0; k < gs.size(); ++k) {
    Vec x = gs.node(k);
    vals[k] = 0.5 * x.norm2() + 0.1 * std::abs(x[0]);
  }
  Potential gp = make_grid_potential(gs, vals);
  GridSpec query = GridSpec::over(Vec{-5, -5}, Vec{5, 5}, {257, 257, 1});
  bench("legendre 513^2 -> 257^2", [&] {
    Potential conj = legendre_transform(gp, query);
    return potential_value(conj, Vec{1.25, -0.75});
  });

  LogConcaveFn gauss1 = standard_gaussian(1);
  ConvexBody interval = make_interval(-1, 1);
  LogConcaveFn ind = indicator_fn(interval);
  bench("integral curve 1d", [&] {
    Schedule sched{14};
    QuadratureSpec spec;
    return integral_curve(gauss1, ind, sched, spec).integrals.back();
  });

  return 0;
}

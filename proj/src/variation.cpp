#include "lcgeo/variation.hpp"

#include <algorithm>
#include <cmath>

#include "lcgeo/quadrature_rule.hpp"

namespace lcgeo {

std::vector<double> Schedule::values() const {
  std::vector<double> t;
  for (int k = 0; k <= depth; ++k) t.push_back(std::pow(2.0, -k));
  return t;
}

IntegralCurve integral_curve(const LogConcaveFn& f, const LogConcaveFn& g, const Schedule& schedule,
                             const QuadratureSpec& spec) {
  IntegralCurve curve;
  curve.t = schedule.values();
  curve.base = integrate(f, spec);
  require(curve.base > 0 && std::isfinite(curve.base), "integral_curve: integral of f not in (0, inf)");
  curve.integrals.resize(curve.t.size());
  std::exception_ptr err;
  kernels::indexed_for(curve.t.size(), [&](size_t k) {
    try {
      curve.integrals[k] = integrate(sup_convolve(f, g, curve.t[k]), spec);
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
      err = std::current_exception();
      curve.integrals[k] = kInf;
    }
  });
  if (err) std::rethrow_exception(err);
  return curve;
}

LimitEstimate delta_limit(const IntegralCurve& curve) {
  const size_t K = curve.t.size();
  require(K >= 3, "delta_limit: schedule too short");
  LimitEstimate est;
  const double logI0 = std::log(curve.base);
  for (size_t k = 0; k < K; ++k)
    est.quotients.push_back((std::log(curve.integrals[k]) - logI0) / curve.t[k]);

  // concavity of log I: interval slopes must not decrease moving toward 0
  double prev_slope = -kInf;
  for (size_t k = 0; k + 1 < K; ++k) {
    double s = (std::log(curve.integrals[k]) - std::log(curve.integrals[k + 1])) /
               (curve.t[k] - curve.t[k + 1]);
    if (prev_slope > -kInf) est.max_concavity_defect = std::max(est.max_concavity_defect, prev_slope - s);
    prev_slope = s;
  }
  // leftmost interval [0, t_K]
  est.max_concavity_defect =
      std::max(est.max_concavity_defect, prev_slope - est.quotients.back());

  for (size_t k = 0; k + 1 < K; ++k)
    est.max_quotient_drop = std::max(est.max_quotient_drop, est.quotients[k] - est.quotients[k + 1]);

  const double qK = est.quotients[K - 1], qK1 = est.quotients[K - 2];
  const double noise = 1e-6 * (1.0 + std::abs(qK));
  if (est.max_quotient_drop > noise)
    fail("delta_limit: quotients not monotone beyond noise (quadrature inconsistency)");

  const double q0 = est.quotients[0];
  const bool growing = (qK - qK1) > 0.05 * std::max(std::abs(qK), 1e-12);
  if (std::abs(qK) > 1e3 * std::max(std::abs(q0), 1e-9 * std::abs(qK)) && growing && std::abs(qK) > 1e-6) {
    est.divergence_suspected = true;
    est.value = kInf;
    return est;
  }
  // one Richardson step on the halving schedule: q(t) ~ L + a t
  double extrapolated = 2 * qK - qK1;
  est.value = curve.base * extrapolated;
  est.converged = std::abs(qK - qK1) <= 0.05 * std::max(std::abs(qK), 1e-12) + 1e-12;
  return est;
}

namespace {

// query window for grid conjugates: cover the mu atoms with margin
GridSpec conjugate_window(const DiscreteMeasure& mu, int dim) {
  Vec lo(dim), hi(dim);
  for (int d = 0; d < dim; ++d) {
    lo[d] = -1;
    hi[d] = 1;
  }
  for (const auto& a : mu.atoms)
    for (int d = 0; d < dim; ++d) {
      lo[d] = std::min(lo[d], a.point[d]);
      hi[d] = std::max(hi[d], a.point[d]);
    }
  for (int d = 0; d < dim; ++d) {
    double pad = 0.1 * (hi[d] - lo[d]) + 0.5;
    lo[d] -= pad;
    hi[d] += pad;
  }
  int counts = dim == 1 ? 2049 : 257;
  return GridSpec::over(lo, hi, {counts, dim > 1 ? counts : 1, 1});
}

}  // namespace

MeasureFormulaResult delta_measure_formula(const LogConcaveFn& f, const LogConcaveFn& g,
                                           const QuadratureSpec& spec) {
  MeasureFormulaResult r;
  DiscreteMeasure mu = moment_measure(f, spec);
  SupportFn hg;
  if (auto closed = legendre_transform_closed(g.potential())) {
    hg = SupportFn::closed(*closed);
  } else {
    hg = support_function_of(g, conjugate_window(mu, f.dim()));
  }
  r.mu_term = integrate_measure(mu, [&](const Vec& y) { return hg(y); });
  DiscreteMeasure nu = boundary_measure(f, spec);
  const ConvexBody& Kg = g.support();
  r.nu_term = integrate_measure(nu, [&](const Vec& u) { return support_function(Kg, u); });
  return r;
}

double delta_via_levelsets(const LogConcaveFn& f, const ConvexBody& L, const CoareaOptions& opts) {
  const int n = f.dim();
  double smax = std::exp(-potential_min_value(f.potential()));
  const auto& gl = gauss_legendre(opts.s_order);
  double total = 0;
  for (int j = 0; j < opts.s_panels; ++j) {
    double hi = smax * std::pow(2.0, -j);
    double lo = j + 1 == opts.s_panels ? 0.0 : smax * std::pow(2.0, -j - 1);
    for (size_t q = 0; q < gl.nodes.size(); ++q) {
      double s = 0.5 * (lo + hi) + 0.5 * (hi - lo) * gl.nodes[q];
      double w = 0.5 * (hi - lo) * gl.weights[q];
      total += w * n * quermassintegrals(level_set(f, s), L).w[1];
    }
  }
  return total;
}

std::pair<double, double> scaling_shift_check(const LogConcaveFn& f, const LogConcaveFn& g, double c,
                                              const Schedule& schedule, const QuadratureSpec& spec) {
  LimitEstimate base = delta_limit(integral_curve(f, g, schedule, spec));
  LimitEstimate scaled = delta_limit(integral_curve(f, scale_fn(g, c), schedule, spec));
  double integral_f = integrate(f, spec);
  return {scaled.value - base.value, c * integral_f};
}

PointwiseCheck pointwise_derivative_check(const LogConcaveFn& f, const LogConcaveFn& g, const Vec& x,
                                          const Schedule& schedule) {
  require(g.support().bounded(), "pointwise_derivative_check: g must be compactly supported");
  PointwiseCheck out;
  out.x = x;
  double fx = f(x);
  require(fx > 0, "pointwise_derivative_check: x outside the support of f");
  GradientResult gr = potential_gradient(f.potential(), x);
  out.kink = gr.flagged;
  SupportFn hg = support_function_of(g);
  out.rhs = hg(gr.grad) * fx;

  auto ts = schedule.values();
  std::vector<double> q;
  const double logf = std::log(fx);
  for (double t : ts) {
    double v = sup_convolve(f, g, t)(x);
    q.push_back((std::log(v) - logf) / t);
  }
  out.lhs = fx * (2 * q[q.size() - 1] - q[q.size() - 2]);
  return out;
}

std::vector<double> truncation_convergence(const LogConcaveFn& f, const LogConcaveFn& g,
                                           const std::vector<double>& m_list,
                                           const QuadratureSpec& spec) {
  std::vector<double> out;
  for (double m : m_list) {
    require(m > 0, "truncation_convergence: radii must be positive");
    LogConcaveFn gm = g;
    if (g.support().bounded() && g.support().outer_radius() <= m) {
      // truncation inactive
    } else {
      require(potential_domain(g.potential()).is_all_space(),
              "truncation_convergence: unsupported partial truncation");
      Potential p = make_restricted(g.potential(), make_ball(Vec::zero(g.dim()), m));
      gm = LogConcaveFn(std::move(p));
    }
    out.push_back(delta_measure_formula(f, gm, spec).total());
  }
  return out;
}

VariationReport main_theorem_report(const LogConcaveFn& f, const LogConcaveFn& g,
                                    const Schedule& schedule, const QuadratureSpec& spec) {
  VariationReport rep;
  IntegralCurve curve = integral_curve(f, g, schedule, spec);
  rep.ts = curve.t;
  rep.limit = delta_limit(curve);
  rep.lhs = rep.limit.value;
  rep.lhs_infinite = rep.limit.divergence_suspected;
  rep.rhs = delta_measure_formula(f, g, spec);
  double rhs = rep.rhs.total();
  if (std::isinf(rep.lhs) && std::isinf(rhs)) rep.relative_error = 0;
  else if (std::isinf(rep.lhs) || std::isinf(rhs)) rep.relative_error = kInf;
  else rep.relative_error = std::abs(rep.lhs - rhs) / std::max(std::abs(rhs), 1.0);
  return rep;
}

}  // namespace lcgeo

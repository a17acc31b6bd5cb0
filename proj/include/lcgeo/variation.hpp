#pragma once

#include "lcgeo/supconv.hpp"
#include "lcgeo/transform.hpp"
#include "lcgeo/tv.hpp"

namespace lcgeo {

/// Geometric schedule t_k = 2^{-k}, k = 0..depth.
struct Schedule {
  int depth = 12;
  std::vector<double> values() const;
};

/// Samples of t -> integral of f * (t g), plus the base integral of f.
struct IntegralCurve {
  std::vector<double> t;
  std::vector<double> integrals;
  double base = 0;
};

IntegralCurve integral_curve(const LogConcaveFn& f, const LogConcaveFn& g, const Schedule& schedule,
                             const QuadratureSpec& spec);

struct LimitEstimate {
  double value = 0;  // +inf when divergence is suspected
  bool converged = false;
  bool divergence_suspected = false;
  std::vector<double> quotients;     // (log I(t_k) - log I(0)) / t_k, schedule order
  double max_concavity_defect = 0;   // of log I over the schedule
  double max_quotient_drop = 0;      // monotonicity violation of the quotients
};

/// One-sided derivative through the supremum characterization: the quotients
/// increase as t drops, so the last two extrapolate the limit. Throws when the
/// quotients are non-monotone beyond noise.
LimitEstimate delta_limit(const IntegralCurve& curve);

struct MeasureFormulaResult {
  double mu_term = 0;  // integral of h_g against mu_f
  double nu_term = 0;  // integral of h_{K_g} against nu_f
  double total() const { return mu_term + nu_term; }
};

MeasureFormulaResult delta_measure_formula(const LogConcaveFn& f, const LogConcaveFn& g,
                                           const QuadratureSpec& spec);

/// Third route for g = indicator of L: n * integral over s of W_1(F_s, L).
double delta_via_levelsets(const LogConcaveFn& f, const ConvexBody& L,
                           const CoareaOptions& opts = {});

/// (delta(f, e^c g) - delta(f, g), c * integral f); computed through the limit.
std::pair<double, double> scaling_shift_check(const LogConcaveFn& f, const LogConcaveFn& g,
                                              double c, const Schedule& schedule,
                                              const QuadratureSpec& spec);

struct PointwiseCheck {
  Vec x;
  double lhs = 0;  // extrapolated pointwise quotient
  double rhs = 0;  // h_g(grad phi(x)) f(x)
  bool kink = false;
};
PointwiseCheck pointwise_derivative_check(const LogConcaveFn& f, const LogConcaveFn& g, const Vec& x,
                                          const Schedule& schedule);

/// delta(f, g restricted to |x| <= m) for each m; nondecreasing by the
/// truncation argument.
std::vector<double> truncation_convergence(const LogConcaveFn& f, const LogConcaveFn& g,
                                           const std::vector<double>& m_list,
                                           const QuadratureSpec& spec);

struct VariationReport {
  double lhs = 0;
  bool lhs_infinite = false;
  MeasureFormulaResult rhs;
  double relative_error = 0;  // |lhs - rhs| / max(|rhs|, 1)
  LimitEstimate limit;
  std::vector<double> ts;
};

VariationReport main_theorem_report(const LogConcaveFn& f, const LogConcaveFn& g,
                                    const Schedule& schedule, const QuadratureSpec& spec);

}  // namespace lcgeo

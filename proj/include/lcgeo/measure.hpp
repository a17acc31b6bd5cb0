#pragma once

#include <functional>
#include <string>

#include "lcgeo/quadrature.hpp"

namespace lcgeo {

enum class MeasureDomain { euclidean, sphere };
enum class MeasureKind { moment, boundary, facet_area, custom };

/// Weighted sample measure; the working representation of mu_f, nu_f and S_K.
struct DiscreteMeasure {
  struct Atom {
    Vec point;
    double weight;
  };
  int dim = 0;
  MeasureDomain domain = MeasureDomain::euclidean;
  MeasureKind kind = MeasureKind::custom;
  std::vector<Atom> atoms;
  long flagged_gradients = 0;  // nodes dropped at nondifferentiable points

  double total_mass() const;
};

/// S_K for polytopes and bounded boxes: one atom per facet at the outward
/// normal, weighted by the facet measure.
DiscreteMeasure surface_area_measure(const ConvexBody& K);

/// mu_f: push-forward of f dx under the potential gradient. Exact atoms for
/// indicators and piecewise-linear 1D potentials, jittered quadrature atoms
/// otherwise. Throws when more than 0.1% of the nodes sit on kinks.
DiscreteMeasure moment_measure(const LogConcaveFn& f, const QuadratureSpec& spec);

/// nu_f: push-forward of f-weighted boundary Hausdorff measure under the
/// Gauss map of the support. Zero when the support has no boundary.
DiscreteMeasure boundary_measure(const LogConcaveFn& f, const QuadratureSpec& spec);

double integrate_measure(const DiscreteMeasure& m, const std::function<double(const Vec&)>& psi);

/// Componentwise first moment, sum of weight * point.
Vec measure_moment(const DiscreteMeasure& m);

/// integral of |x| dm
double measure_first_moment(const DiscreteMeasure& m);

/// integral x d(mu_f) + integral x d(nu_f); the centering identity says zero.
Vec centering_defect(const LogConcaveFn& f, const QuadratureSpec& spec);

/// nu_f mass below tol means f is continuous H^{n-1}-a.e.
bool essentially_continuous(const LogConcaveFn& f, const QuadratureSpec& spec, double tol);

/// Paper-style finiteness cap on nu_f mass from an envelope bound.
double boundary_mass_bound(const EnvelopeBound& env, int dim);

/// CSV export: coordinate columns, weight, domain tag.
std::string measure_csv(const DiscreteMeasure& m);

/// Boundary integral of x -> f(x) q(x) over the support boundary (facet or
/// spherical quadrature); used by nu_f and the divergence identity.
double boundary_integral(const LogConcaveFn& f, const QuadratureSpec& spec,
                         const std::function<double(const Vec& x, const Vec& normal)>& q);

}  // namespace lcgeo

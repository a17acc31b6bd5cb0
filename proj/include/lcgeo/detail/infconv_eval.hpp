#pragma once

#include "lcgeo/potential.hpp"

namespace lcgeo::detail {

// Strategy tags for InfConvPotential::strategy, chosen when sup_convolve builds
// the form. Exact closed paths first, deterministic search last.
enum InfConvStrategy {
  kScan = 0,        // multiround grid refinement over the inner domain
  kGolden1D = 1,    // 1D nested scan of the convex objective
  kClamp1D = 2,     // indicator inner, 1D: clamp against the outer minimizer
  kRadialBall = 3,  // radial outer, ball inner: radial clamp
  kQuadBall = 4,    // quadratic outer, ball inner: trust-region secular equation
  kSepBox = 5,      // separable outer, box inner: per-axis clamps
  kProjDist = 6,    // indicator outer, centered radial inner: distance formula
};

double infconv_value(const InfConvPotential& ic, int dim, const Vec& x);

// Deterministic minimizer of a convex extended-real objective over a body,
// by nested grid refinement; used for restricted minima as well.
double minimize_over_body(const std::function<double(const Vec&)>& obj, const ConvexBody& domain,
                          Vec* argmin = nullptr);

}  // namespace lcgeo::detail

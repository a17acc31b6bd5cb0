#pragma once

#include "lcgeo/potential.hpp"

namespace lcgeo {

/// (t . g)(x) = g(x/t)^t.
LogConcaveFn dilate(const LogConcaveFn& g, double t);

/// f * (t . g), the Asplund sum with a dilated second summand; t = 0 gives f.
/// Closed forms cover indicator pairs, quadratic pairs and the clamp/radial/
/// separable erosion families; everything else evaluates the infimal
/// convolution by deterministic nested search.
LogConcaveFn sup_convolve(const LogConcaveFn& f, const LogConcaveFn& g, double t);

}  // namespace lcgeo

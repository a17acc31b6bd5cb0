#pragma once

#include <functional>

#include "lcgeo/potential.hpp"

namespace lcgeo {

/// f(x) <= exp(log_amplitude - decay |x|) everywhere.
struct EnvelopeBound {
  double log_amplitude = 0;
  double decay = 1;
  double amplitude() const { return std::exp(log_amplitude); }
};

/// Found by sampling the potential along rays from an interior anchor and
/// taking the minimal asymptotic slope; the bound is re-verified on a dense
/// sample before it is returned. Throws when no positive decay exists.
EnvelopeBound exponential_envelope(const LogConcaveFn& f);

struct QuadratureSpec {
  int panels = 8;            // base panel count per axis / radius
  int order = 16;            // Gauss-Legendre order per panel
  int angular_panels = 16;   // polar rules
  double tail_rel = 1e-10;   // relative truncation tail
  uint64_t jitter_seed = 1;
  double jitter = 0;         // node perturbation relative to the extent; 0 = off
  std::array<std::vector<double>, 3> extra_splits;  // caller-supplied panel seams

  QuadratureSpec refined() const {
    QuadratureSpec s = *this;
    s.panels *= 2;
    s.angular_panels *= 2;
    return s;
  }
};

struct InteriorRule {
  std::vector<Vec> nodes;
  std::vector<double> weights;
  double extent = 0;      // outer radius of the integration region
  double tail_bound = 0;  // certified bound on the discarded envelope tail
};

/// Nodes/weights over the support of f clipped to the envelope truncation box.
InteriorRule interior_rule(const LogConcaveFn& f, const QuadratureSpec& spec);

/// Integral of f over R^n. Exact volumes for indicators, quadrature otherwise;
/// throws on divergent or zero integrals.
double integrate(const LogConcaveFn& f, const QuadratureSpec& spec = {});

/// Integral of w(x) f(x) dx with the same rule machinery.
double integrate_weighted(const LogConcaveFn& f, const QuadratureSpec& spec,
                          const std::function<double(const Vec&)>& w);

}  // namespace lcgeo

#pragma once

#include <string>

#include "lcgeo/kernels.hpp"
#include "lcgeo/measure.hpp"

namespace lcgeo {

/// Node-sampled nonnegative field with compact support inside the lattice
/// (zero margin of at least two cells on every side).
struct GridField {
  GridSpec spec;  // dim 1 or 2
  std::vector<double> values;

  double max_value() const;
};

/// Sample f on [lo, hi] with the outer two node layers forced to zero;
/// throws if f is not negligible there.
GridField sample_field(const LogConcaveFn& f, const Vec& lo, const Vec& hi, int nodes_per_axis);

bool field_log_concave(const GridField& field, double tol);

/// Anisotropic total variation by forward differences:
/// sum over cells of h_L(-D+ f) h^n.
double tv_grid(const GridField& field, const ConvexBody& L);
double tv_grid(const GridField& field, const ConvexBody& L, kernels::Exec mode);

/// TV_L(f) = integral h_L dmu_f + integral h_L dnu_f.
struct TVDecomposition {
  double gradient_part = 0;
  double boundary_part = 0;
  double total() const { return gradient_part + boundary_part; }
};
TVDecomposition tv_representation(const LogConcaveFn& f, const ConvexBody& L,
                                  const QuadratureSpec& spec);

/// Smooth compactly supported test field with analytic divergence; the bump
/// profile is (1-u^2)^3 per axis over [lo, hi].
struct TestField {
  std::string name;
  int dim = 1;
  std::function<Vec(const Vec&)> value;
  std::function<double(const Vec&)> divergence;
  Vec lo, hi;  // support box
};

std::vector<TestField> test_field_catalog(int dim);

/// Largest gauge norm of the field over a dense sample of its support.
double field_max_gauge(const TestField& field, const ConvexBody& L);

TestField scale_field(const TestField& field, double factor);

/// The three integrals of the divergence identity:
/// integral f div(Phi) = integral <grad phi, Phi> f + boundary term.
struct DivergencePairing {
  double lhs = 0;
  double gradient_term = 0;
  double boundary_term = 0;
  double residual() const { return std::abs(lhs - gradient_term - boundary_term); }
};
DivergencePairing divergence_pairing_check(const LogConcaveFn& f, const TestField& field,
                                           const QuadratureSpec& spec);

/// Super-level set { f >= s } as a catalog body (closed-form route).
ConvexBody level_set(const LogConcaveFn& f, double s);
/// Hull of lattice cells with value >= s (valid for log-concave fields).
ConvexBody level_set_grid(const GridField& field, double s);

struct CoareaOptions {
  int s_panels = 32;  // geometric panels toward s = 0
  int s_order = 8;
};

/// integral over s of Per_L(F_s): closed-form level sets of f.
double layered_perimeter_integral(const LogConcaveFn& f, const ConvexBody& L,
                                  const CoareaOptions& opts = {});
/// Same from a grid field via super-level hulls.
double layered_perimeter_integral(const GridField& field, const ConvexBody& L,
                                  const CoareaOptions& opts = {});

struct CoareaResult {
  double tv = 0;
  double layered = 0;
  double residual() const { return std::abs(tv - layered) / std::max(std::abs(tv), 1e-300); }
};

/// lhs from the sampled grid, rhs from closed-form level sets of f.
CoareaResult coarea_check(const LogConcaveFn& f, const GridField& field, const ConvexBody& L,
                          const CoareaOptions& opts = {});
/// Both sides from the grid (rejects fields that are not log-concave).
CoareaResult coarea_check(const GridField& field, const ConvexBody& L,
                          const CoareaOptions& opts = {});

std::string field_csv(const GridField& field);
GridField field_from_csv(const std::string& text);

}  // namespace lcgeo

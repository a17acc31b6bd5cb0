#pragma once

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "lcgeo/body.hpp"
#include "lcgeo/grid.hpp"

namespace lcgeo {

class Potential;

/// phi(x) = 1/2 x'Ax + b'x + c with A positive semidefinite.
struct QuadraticPotential {
  Mat A;
  Vec b;
  double c = 0;
};

/// phi(x) = coeff |x - center|^p + <tilt, x> + offset, p >= 1.
struct PowerNormPotential {
  double coeff = 1;
  double exponent = 1;
  Vec center;
  Vec tilt;
  double offset = 0;
};

/// phi(x) = <b, x> + c. Only integrable in combination with an indicator.
struct LinearPotential {
  Vec b;
  double c = 0;
};

/// phi = scale ((1 - |x-center|/radius)^{-1} - 1) + offset inside the ball,
/// +inf outside; blows up at the boundary, so f = e^{-phi} vanishes there.
struct BarrierPotential {
  Vec center;
  double radius = 1;
  double scale = 1;
  double offset = 0;
};

/// Extended-real samples on a lattice; +inf is the IEEE infinity sentinel.
struct GridPotentialData {
  GridSpec grid;
  std::vector<double> values;
};

/// base + indicator of body (the base must be finite everywhere).
struct RestrictedPotential {
  std::shared_ptr<const Potential> base;
  ConvexBody body;
};

/// h_K(y - anchor) + offset; arises as the conjugate of restricted linear
/// potentials and backs closed-form support functions.
struct SupportPotential {
  ConvexBody body;
  Vec anchor;
  double offset = 0;
};

/// Infimal convolution inf_y [ outer(y) + t inner((x-y)/t) ], t > 0.
/// The evaluation strategy is resolved once at construction.
struct InfConvPotential {
  std::shared_ptr<const Potential> outer;
  std::shared_ptr<const Potential> inner;
  double t = 1;
  ConvexBody inner_domain;  // K of the inner potential
  int strategy = 0;         // see detail/infconv_eval.hpp
  Vec outer_min_point;      // cached for the clamp strategies
  double inner_const = 0;   // value of the constant summand on its domain
  ConvexBody outer_body;    // projection body for the distance strategy
};

/// t * base(x / t), t > 0.
struct DilatedPotential {
  std::shared_ptr<const Potential> base;
  double t = 1;
};

class Potential {
 public:
  using Form = std::variant<QuadraticPotential, PowerNormPotential, LinearPotential,
                            BarrierPotential, GridPotentialData, RestrictedPotential,
                            SupportPotential, InfConvPotential, DilatedPotential>;

  Potential() = default;
  Potential(Form f, int dim) : form_(std::make_shared<Form>(std::move(f))), dim_(dim) {}

  const Form& form() const { return *form_; }
  std::shared_ptr<const Potential> shared() const { return std::make_shared<Potential>(*this); }
  int dim() const { return dim_; }
  bool valid() const { return form_ != nullptr; }

 private:
  std::shared_ptr<const Form> form_;
  int dim_ = 0;
};

Potential make_quadratic(Mat A, Vec b, double c = 0);
Potential make_power_norm(double coeff, double exponent, Vec center, Vec tilt = {}, double offset = 0);
Potential make_linear(Vec b, double c = 0);
Potential make_barrier(Vec center, double radius, double scale = 1, double offset = 0);
Potential make_grid_potential(GridSpec grid, std::vector<double> values);
Potential make_restricted(const Potential& base, const ConvexBody& body);
Potential make_support_potential(const ConvexBody& body, Vec anchor, double offset = 0);
Potential make_indicator(const ConvexBody& body, double log_height = 0);  // phi = Ind_K - log_height

/// Extended-real evaluation; +inf outside the effective domain.
double potential_value(const Potential& phi, const Vec& x);

struct GradientResult {
  Vec grad;
  bool flagged = false;  // nondifferentiable point; minimal-norm subgradient candidate
};

/// Gradient at an interior point of the effective domain; throws outside.
GradientResult potential_gradient(const Potential& phi, const Vec& x);

/// Closure of { phi < inf }.
ConvexBody potential_domain(const Potential& phi);

/// Minimum value of phi (exact for the closed forms that need it).
double potential_min_value(const Potential& phi);
/// A minimizer when one exists and is cheap to get.
std::optional<Vec> potential_minimizer(const Potential& phi);

Potential translate_potential(const Potential& phi, const Vec& a);   // phi(. - a)
Potential dilate_potential(const Potential& phi, double t);          // t phi(. / t)

/// Coordinates along `axis` where phi (or its restriction) can be nonsmooth;
/// quadrature panels split there.
std::vector<double> potential_axis_kinks(const Potential& phi, int axis);

/// Spherical kink structure: phi is analytic between spheres |x - center| = r.
/// Polar quadrature centered there integrates e^{-phi} spectrally.
struct PolarStructure {
  Vec center;
  std::vector<double> radii;
};
std::optional<PolarStructure> potential_polar_structure(const Potential& phi);

/// Upper semicontinuous log-concave function f = e^{-phi} with its support.
class LogConcaveFn {
 public:
  LogConcaveFn() = default;
  explicit LogConcaveFn(Potential phi)
      : potential_(std::move(phi)), support_(potential_domain(potential_)) {}
  LogConcaveFn(Potential phi, ConvexBody support)
      : potential_(std::move(phi)), support_(std::move(support)) {}

  const Potential& potential() const { return potential_; }
  const ConvexBody& support() const { return support_; }
  int dim() const { return potential_.dim(); }

  double operator()(const Vec& x) const { return std::exp(-potential_value(potential_, x)); }

 private:
  Potential potential_;
  ConvexBody support_;
};

LogConcaveFn standard_gaussian(int dim);
LogConcaveFn exponential_norm(int dim, double coeff = 1, double exponent = 1);  // e^{-coeff |x|^p}
LogConcaveFn indicator_fn(const ConvexBody& K, double log_height = 0);
LogConcaveFn half_exponential(int dim, const Vec& slope);  // e^{-<slope,x>} on the nonneg orthant

LogConcaveFn translate_fn(const LogConcaveFn& f, const Vec& a);
LogConcaveFn scale_fn(const LogConcaveFn& f, double log_factor);  // e^{c} f

/// Sampled convexity test on the segment battery the invariants prescribe.
bool convexity_sample_check(const Potential& phi, const std::vector<Vec>& probes, double tol);

}  // namespace lcgeo

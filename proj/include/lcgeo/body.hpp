#pragma once

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "lcgeo/vec.hpp"

namespace lcgeo {

class ConvexBody;

/// Bounded polytope held by its extreme points, hull-canonical:
///   1D sorted endpoints, 2D CCW hull from the lexicographic minimum,
///   3D deduplicated hull vertices in lexicographic order.
/// Degenerate (lower-dimensional) vertex sets are allowed; full dimension is
/// required only by the operations that need facets.
struct Polytope {
  std::vector<Vec> vertices;
};

struct Ball {
  Vec center;
  double radius = 0;
};

/// Axis box; entries of lo may be -inf and entries of hi +inf, which is how
/// unbounded polyhedral supports (half-lines, orthants, all of R^n) are carried.
struct Box {
  Vec lo, hi;
};

/// { c + M^{1/2} u : |u| <= 1 }; support function <c,t> + sqrt(t' M t).
struct Ellipsoid {
  Vec center;
  Mat shape;
};

/// Lazy Minkowski sum; support functions add.
struct SumBody {
  std::vector<ConvexBody> parts;
};

struct AllSpace {
  int dim = 0;
};

class ConvexBody {
 public:
  using Form = std::variant<Polytope, Ball, Box, Ellipsoid, SumBody, AllSpace>;

  ConvexBody() = default;
  explicit ConvexBody(Form f) : form_(std::make_shared<Form>(std::move(f))) {}

  const Form& form() const { return *form_; }
  int dim() const;
  bool valid() const { return form_ != nullptr; }

  bool bounded() const;
  bool is_all_space() const { return std::holds_alternative<AllSpace>(form()); }
  /// Largest coordinate magnitude over the body; +inf when unbounded.
  double outer_radius() const;
  bool contains(const Vec& x, double tol = 1e-9) const;
  bool origin_interior(double tol = 1e-12) const;
  /// A point strictly inside (vertex centroid / center); throws for empty forms.
  Vec interior_point() const;

 private:
  std::shared_ptr<const Form> form_;
};

ConvexBody make_polytope(int dim, std::vector<Vec> points);
ConvexBody make_interval(double a, double b);
ConvexBody make_point(const Vec& v);
ConvexBody make_ball(const Vec& center, double radius);
ConvexBody make_box(const Vec& lo, const Vec& hi);
ConvexBody make_ellipsoid(const Vec& center, const Mat& shape);
ConvexBody make_all_space(int dim);

/// h_K(dir) = sup_{x in K} <x, dir>; exact for every form, +inf when the body
/// is unbounded in that direction.
double support_function(const ConvexBody& K, const Vec& dir);

/// Minkowski gauge ||x||_L; requires 0 in int L.
double gauge_norm(const ConvexBody& L, const Vec& x);

ConvexBody minkowski_sum(const ConvexBody& K, const ConvexBody& L);
ConvexBody scale_body(const ConvexBody& K, double t);  // t >= 0; t = 0 gives {0}
ConvexBody translate_body(const ConvexBody& K, const Vec& a);

double volume(const ConvexBody& K);

/// One facet of a polyhedral body. Bounded facets carry their vertex list;
/// facets of boxes with infinite extents are described by the pinned axis and
/// the ranges of the remaining coordinates.
struct Facet {
  Vec normal;      // unit outward
  double measure;  // H^{n-1} of the facet; +inf when unbounded
  std::vector<Vec> verts;
  bool is_box_facet = false;
  int axis = -1;
  double value = 0;
  Vec range_lo, range_hi;  // other-axis ranges for box facets
};

/// Facets of a full-dimensional polytope or box (only finite-pinned sides for
/// unbounded boxes). Throws for balls/ellipsoids/sums and degenerate polytopes.
std::vector<Facet> body_facets(const ConvexBody& K);

struct QuermassVector {
  std::vector<double> w;   // W_0 .. W_n
  double fit_residual;     // max interpolation defect at the fit nodes
  double heldout_residual; // relative defect at t = 0.5
};

/// Relative quermassintegrals from the volume polynomial of K + tL,
/// interpolated at t = 0..n.
QuermassVector quermassintegrals(const ConvexBody& K, const ConvexBody& L);

/// Integral of h_X against the surface area measure of Y. Exact for polyhedral
/// Y; quadrature with panel-doubling certification for smooth Y in 2D.
double mixed_surface_integral(const ConvexBody& X, const ConvexBody& Y);

/// Per_L(F) = integral of h_L over S_F; cross-checked against n W_1(F, L)
/// whenever both routes apply (cross_check = false skips the second route,
/// for tight inner loops).
double anisotropic_perimeter(const ConvexBody& F, const ConvexBody& L, bool cross_check = true);

/// Boundary length (2D) / facet-measure total; used by the Cauchy-style
/// pairing against balls.
double surface_measure_total(const ConvexBody& K);

std::vector<Vec> hull2d(std::vector<Vec> pts);

/// Euclidean projection onto the body (intervals, boxes, balls, 2D polytopes).
Vec project_onto(const ConvexBody& K, const Vec& x);

/// Componentwise support interval [ -h(-e_i), h(e_i) ]; entries may be infinite.
std::pair<Vec, Vec> bounding_box(const ConvexBody& K);

}  // namespace lcgeo

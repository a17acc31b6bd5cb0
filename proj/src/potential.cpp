#include "lcgeo/potential.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "lcgeo/detail/infconv_eval.hpp"

namespace lcgeo {

namespace {

const LinearPotential* as_linear(const Potential& p) { return std::get_if<LinearPotential>(&p.form()); }

double grid_value(const GridPotentialData& g, const Vec& x) {
  const int n = g.grid.dim;
  std::array<int, 3> cell{0, 0, 0};
  std::array<double, 3> frac{0, 0, 0};
  for (int i = 0; i < n; ++i) {
    double u = (x[i] - g.grid.origin[i]) / g.grid.spacing[i];
    if (u < 0 || u > g.grid.counts[static_cast<size_t>(i)] - 1) return kInf;
    int c = static_cast<int>(std::floor(u));
    c = std::min(c, g.grid.counts[static_cast<size_t>(i)] - 2);
    cell[static_cast<size_t>(i)] = c;
    frac[static_cast<size_t>(i)] = u - c;
  }
  // multilinear; any +inf corner makes the value +inf
  double acc = 0;
  const int corners = 1 << n;
  for (int m = 0; m < corners; ++m) {
    std::array<int, 3> idx = cell;
    double w = 1;
    for (int i = 0; i < n; ++i) {
      if ((m >> i) & 1) {
        idx[static_cast<size_t>(i)] += 1;
        w *= frac[static_cast<size_t>(i)];
      } else {
        w *= 1 - frac[static_cast<size_t>(i)];
      }
    }
    double v = g.values[g.grid.flatten(idx)];
    if (!std::isfinite(v)) {
      if (w > 0) return kInf;
      continue;
    }
    acc += w * v;
  }
  return acc;
}

}  // namespace

// --- constructors ----------------------------------------------------------

Potential make_quadratic(Mat A, Vec b, double c) {
  require(A.dim == b.dim && b.dim >= 1, "make_quadratic: dimension mismatch");
  require(A.symmetric(1e-10) && A.positive_semidefinite(), "make_quadratic: A must be PSD");
  return Potential(Potential::Form{QuadraticPotential{A, b, c}}, b.dim);
}

Potential make_power_norm(double coeff, double exponent, Vec center, Vec tilt, double offset) {
  require(coeff > 0, "make_power_norm: coefficient must be positive");
  require(exponent >= 1, "make_power_norm: exponent must be >= 1");
  if (tilt.dim == 0) tilt = Vec::zero(center.dim);
  require(tilt.dim == center.dim, "make_power_norm: dimension mismatch");
  return Potential(Potential::Form{PowerNormPotential{coeff, exponent, center, tilt, offset}}, center.dim);
}

Potential make_linear(Vec b, double c) {
  require(b.dim >= 1, "make_linear: dimension required");
  return Potential(Potential::Form{LinearPotential{b, c}}, b.dim);
}

Potential make_barrier(Vec center, double radius, double scale, double offset) {
  require(radius > 0 && scale > 0, "make_barrier: radius and scale must be positive");
  return Potential(Potential::Form{BarrierPotential{center, radius, scale, offset}}, center.dim);
}

Potential make_grid_potential(GridSpec grid, std::vector<double> values) {
  require(grid.dim >= 1 && grid.dim <= 2, "make_grid_potential: grids are 1D or 2D");
  require(values.size() == grid.size(), "make_grid_potential: value count mismatch");
  bool any_finite = false;
  for (double v : values) {
    require(!std::isnan(v) && v != -kInf, "make_grid_potential: values must be in (-inf, +inf]");
    any_finite = any_finite || std::isfinite(v);
  }
  require(any_finite, "make_grid_potential: empty effective domain");
  // finite cells must form per-axis contiguous runs (necessary for convexity)
  if (grid.dim == 1) {
    bool in_run = false, ended = false;
    for (int i = 0; i < grid.counts[0]; ++i) {
      bool fin = std::isfinite(values[static_cast<size_t>(i)]);
      if (fin) require(!ended, "make_grid_potential: finite region not contiguous");
      if (fin) in_run = true;
      if (!fin && in_run) ended = true;
    }
  } else {
    for (int j = 0; j < grid.counts[1]; ++j) {
      bool in_run = false, ended = false;
      for (int i = 0; i < grid.counts[0]; ++i) {
        bool fin = std::isfinite(values[grid.flatten({i, j, 0})]);
        if (fin) require(!ended, "make_grid_potential: finite region not contiguous");
        if (fin) in_run = true;
        if (!fin && in_run) ended = true;
      }
    }
  }
  return Potential(Potential::Form{GridPotentialData{grid, std::move(values)}}, grid.dim);
}

Potential make_restricted(const Potential& base, const ConvexBody& body) {
  require(base.dim() == body.dim(), "make_restricted: dimension mismatch");
  require(potential_domain(base).is_all_space(), "make_restricted: base must be finite everywhere");
  return Potential(Potential::Form{RestrictedPotential{base.shared(), body}}, base.dim());
}

Potential make_support_potential(const ConvexBody& body, Vec anchor, double offset) {
  if (anchor.dim == 0) anchor = Vec::zero(body.dim());
  require(anchor.dim == body.dim(), "make_support_potential: dimension mismatch");
  return Potential(Potential::Form{SupportPotential{body, anchor, offset}}, body.dim());
}

Potential make_indicator(const ConvexBody& body, double log_height) {
  return make_restricted(make_linear(Vec::zero(body.dim()), -log_height), body);
}

// --- evaluation --------------------------------------------------------------

double potential_value(const Potential& phi, const Vec& x) {
  require(x.dim == phi.dim(), "potential_value: dimension mismatch");
  return std::visit(
      [&](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, QuadraticPotential>) {
          return 0.5 * f.A.quad(x) + f.b.dot(x) + f.c;
        } else if constexpr (std::is_same_v<T, PowerNormPotential>) {
          return f.coeff * std::pow(dist(x, f.center), f.exponent) + f.tilt.dot(x) + f.offset;
        } else if constexpr (std::is_same_v<T, LinearPotential>) {
          return f.b.dot(x) + f.c;
        } else if constexpr (std::is_same_v<T, BarrierPotential>) {
          double r = dist(x, f.center);
          if (r >= f.radius) return kInf;
          return f.scale * (1.0 / (1.0 - r / f.radius) - 1.0) + f.offset;
        } else if constexpr (std::is_same_v<T, GridPotentialData>) {
          return grid_value(f, x);
        } else if constexpr (std::is_same_v<T, RestrictedPotential>) {
          if (!f.body.contains(x, 1e-12 * (1.0 + x.norm()))) return kInf;
          return potential_value(*f.base, x);
        } else if constexpr (std::is_same_v<T, SupportPotential>) {
          return support_function(f.body, x - f.anchor) + f.offset;
        } else if constexpr (std::is_same_v<T, InfConvPotential>) {
          return detail::infconv_value(f, phi.dim(), x);
        } else {
          return f.t * potential_value(*f.base, x * (1.0 / f.t));
        }
      },
      phi.form());
}

GradientResult potential_gradient(const Potential& phi, const Vec& x) {
  require(x.dim == phi.dim(), "potential_gradient: dimension mismatch");
  return std::visit(
      [&](const auto& f) -> GradientResult {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, QuadraticPotential>) {
          return {f.A.mul(x) + f.b, false};
        } else if constexpr (std::is_same_v<T, PowerNormPotential>) {
          Vec d = x - f.center;
          double r = d.norm();
          if (r == 0) {
            if (f.exponent > 1) return {f.tilt, false};
            // kink of the norm: minimal-norm element of tilt + coeff * unit ball
            double tn = f.tilt.norm();
            if (tn <= f.coeff) return {Vec::zero(x.dim), true};
            return {f.tilt * (1.0 - f.coeff / tn), true};
          }
          return {d * (f.coeff * f.exponent * std::pow(r, f.exponent - 2)) + f.tilt, false};
        } else if constexpr (std::is_same_v<T, LinearPotential>) {
          return {f.b, false};
        } else if constexpr (std::is_same_v<T, BarrierPotential>) {
          Vec d = x - f.center;
          double r = d.norm();
          if (r >= f.radius) fail("potential_gradient: point outside the domain");
          double dr = f.scale / f.radius / std::pow(1.0 - r / f.radius, 2);
          if (r == 0) return {Vec::zero(x.dim), true};  // radial kink at the center
          return {d * (dr / r), false};
        } else if constexpr (std::is_same_v<T, GridPotentialData>) {
          const int n = f.grid.dim;
          std::array<int, 3> idx{0, 0, 0};
          for (int i = 0; i < n; ++i) {
            double u = (x[i] - f.grid.origin[i]) / f.grid.spacing[i];
            int c = static_cast<int>(std::lround(u));
            require(c >= 1 && c <= f.grid.counts[static_cast<size_t>(i)] - 2,
                    "potential_gradient: grid point too close to the lattice edge");
            idx[static_cast<size_t>(i)] = c;
          }
          Vec g(n);
          bool flagged = false;
          for (int i = 0; i < n; ++i) {
            auto at = [&](int shift) {
              std::array<int, 3> j = idx;
              j[static_cast<size_t>(i)] += shift;
              return f.values[f.grid.flatten(j)];
            };
            double h = f.grid.spacing[i];
            double c0 = at(0), cp = at(1), cm = at(-1);
            require(std::isfinite(c0) && std::isfinite(cp) && std::isfinite(cm),
                    "potential_gradient: outside the interior of the grid domain");
            double fwd = (cp - c0) / h, bwd = (c0 - cm) / h;
            if (std::abs(fwd - bwd) > 0.5 * (std::abs(fwd) + std::abs(bwd)) + 1e-9) {
              flagged = true;
              g[i] = std::abs(fwd) < std::abs(bwd) ? fwd : bwd;
            } else {
              g[i] = 0.5 * (fwd + bwd);
            }
          }
          return {g, flagged};
        } else if constexpr (std::is_same_v<T, RestrictedPotential>) {
          require(f.body.contains(x, 0) || f.body.contains(x, 1e-12 * (1 + x.norm())),
                  "potential_gradient: point outside the support");
          return potential_gradient(*f.base, x);
        } else if constexpr (std::is_same_v<T, SupportPotential>) {
          Vec y = x - f.anchor;
          if (const auto* p = std::get_if<Polytope>(&f.body.form())) {
            double best = -kInf;
            for (const auto& v : p->vertices) best = std::max(best, v.dot(y));
            std::vector<Vec> arg;
            for (const auto& v : p->vertices)
              if (v.dot(y) >= best - 1e-12 * (1 + std::abs(best))) arg.push_back(v);
            if (arg.size() == 1) return {arg[0], false};
            Vec pick = arg[0];
            for (const auto& v : arg)
              if (v.norm() < pick.norm()) pick = v;
            return {pick, true};
          }
          if (const auto* b = std::get_if<Ball>(&f.body.form())) {
            double r = y.norm();
            if (r == 0) {
              double cn = b->center.norm();
              if (cn <= b->radius) return {Vec::zero(x.dim), true};
              return {b->center * (1.0 - b->radius / cn), true};
            }
            return {b->center + y * (b->radius / r), false};
          }
          if (const auto* e = std::get_if<Ellipsoid>(&f.body.form())) {
            double q = std::sqrt(std::max(1e-300, e->shape.quad(y)));
            if (y.norm() == 0) return {e->center, true};
            return {e->center + e->shape.mul(y) * (1.0 / q), false};
          }
          fail("potential_gradient: unsupported support-potential body");
        } else if constexpr (std::is_same_v<T, InfConvPotential>) {
          fail("potential_gradient: not available for infimal convolutions");
        } else {
          return potential_gradient(*f.base, x * (1.0 / f.t));
        }
      },
      phi.form());
}

ConvexBody potential_domain(const Potential& phi) {
  return std::visit(
      [&](const auto& f) -> ConvexBody {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, QuadraticPotential> || std::is_same_v<T, LinearPotential> ||
                      std::is_same_v<T, PowerNormPotential>) {
          return make_all_space(phi.dim());
        } else if constexpr (std::is_same_v<T, BarrierPotential>) {
          return make_ball(f.center, f.radius);
        } else if constexpr (std::is_same_v<T, GridPotentialData>) {
          std::vector<Vec> finite_nodes;
          for (std::size_t k = 0; k < f.grid.size(); ++k)
            if (std::isfinite(f.values[k])) finite_nodes.push_back(f.grid.node(k));
          require(!finite_nodes.empty(), "potential_domain: empty grid domain");
          return make_polytope(f.grid.dim, std::move(finite_nodes));
        } else if constexpr (std::is_same_v<T, RestrictedPotential>) {
          return f.body;
        } else if constexpr (std::is_same_v<T, SupportPotential>) {
          require(f.body.bounded(), "potential_domain: support potential of an unbounded body");
          return make_all_space(phi.dim());
        } else if constexpr (std::is_same_v<T, InfConvPotential>) {
          return minkowski_sum(potential_domain(*f.outer), scale_body(f.inner_domain, f.t));
        } else {
          return scale_body(potential_domain(*f.base), f.t);
        }
      },
      phi.form());
}

double potential_min_value(const Potential& phi) {
  return std::visit(
      [&](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, QuadraticPotential>) {
          if (f.A.positive_definite()) {
            Vec m = f.A.inverse().mul(-f.b);
            return 0.5 * f.A.quad(m) + f.b.dot(m) + f.c;
          }
          bool bz = true;
          for (int i = 0; i < phi.dim(); ++i) bz = bz && f.b[i] == 0;
          if (bz) return f.c;
          return -kInf;
        } else if constexpr (std::is_same_v<T, PowerNormPotential>) {
          auto m = potential_minimizer(phi);
          if (!m) return -kInf;
          return potential_value(phi, *m);
        } else if constexpr (std::is_same_v<T, LinearPotential>) {
          bool bz = true;
          for (int i = 0; i < phi.dim(); ++i) bz = bz && f.b[i] == 0;
          return bz ? f.c : -kInf;
        } else if constexpr (std::is_same_v<T, BarrierPotential>) {
          return f.offset;
        } else if constexpr (std::is_same_v<T, GridPotentialData>) {
          double m = kInf;
          for (double v : f.values)
            if (std::isfinite(v)) m = std::min(m, v);
          return m;
        } else if constexpr (std::is_same_v<T, RestrictedPotential>) {
          if (const auto* lin = as_linear(*f.base)) {
            double h = support_function(f.body, -lin->b);
            return std::isfinite(h) ? lin->c - h : -kInf;
          }
          const Potential base = *f.base;
          return detail::minimize_over_body([&](const Vec& x) { return potential_value(base, x); },
                                            f.body);
        } else if constexpr (std::is_same_v<T, SupportPotential>) {
          return f.body.contains(Vec::zero(phi.dim()), 0) ? f.offset : -kInf;
        } else if constexpr (std::is_same_v<T, InfConvPotential>) {
          return potential_min_value(*f.outer) + f.t * potential_min_value(*f.inner);
        } else {
          return f.t * potential_min_value(*f.base);
        }
      },
      phi.form());
}

std::optional<Vec> potential_minimizer(const Potential& phi) {
  return std::visit(
      [&](const auto& f) -> std::optional<Vec> {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, QuadraticPotential>) {
          if (f.A.positive_definite()) return f.A.inverse().mul(-f.b);
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, PowerNormPotential>) {
          double tn = f.tilt.norm();
          if (tn == 0) return f.center;
          if (f.exponent == 1) {
            if (tn <= f.coeff) return f.center;
            return std::nullopt;  // unbounded below
          }
          double r = std::pow(tn / (f.coeff * f.exponent), 1.0 / (f.exponent - 1.0));
          return f.center - f.tilt * (r / tn);
        } else if constexpr (std::is_same_v<T, LinearPotential>) {
          for (int i = 0; i < phi.dim(); ++i)
            if (f.b[i] != 0) return std::nullopt;
          return Vec::zero(phi.dim());
        } else if constexpr (std::is_same_v<T, BarrierPotential>) {
          return f.center;
        } else if constexpr (std::is_same_v<T, GridPotentialData>) {
          double m = kInf;
          std::size_t arg = 0;
          for (std::size_t k = 0; k < f.values.size(); ++k)
            if (f.values[k] < m) m = f.values[k], arg = k;
          return f.grid.node(arg);
        } else if constexpr (std::is_same_v<T, RestrictedPotential>) {
          if (!f.body.bounded()) return std::nullopt;
          const Potential base = *f.base;
          Vec arg;
          detail::minimize_over_body([&](const Vec& x) { return potential_value(base, x); }, f.body,
                                     &arg);
          return arg;
        } else if constexpr (std::is_same_v<T, SupportPotential>) {
          if (f.body.contains(Vec::zero(phi.dim()), 0)) return f.anchor;
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, InfConvPotential>) {
          auto mo = potential_minimizer(*f.outer);
          auto mi = potential_minimizer(*f.inner);
          if (mo && mi) return *mo + *mi * f.t;
          return std::nullopt;
        } else {
          auto m = potential_minimizer(*f.base);
          if (m) return *m * f.t;
          return std::nullopt;
        }
      },
      phi.form());
}

Potential translate_potential(const Potential& phi, const Vec& a) {
  require(a.dim == phi.dim(), "translate_potential: dimension mismatch");
  return std::visit(
      [&](const auto& f) -> Potential {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, QuadraticPotential>) {
          Vec Aa = f.A.mul(a);
          return make_quadratic(f.A, f.b - Aa, f.c + 0.5 * a.dot(Aa) - f.b.dot(a));
        } else if constexpr (std::is_same_v<T, PowerNormPotential>) {
          return make_power_norm(f.coeff, f.exponent, f.center + a, f.tilt, f.offset - f.tilt.dot(a));
        } else if constexpr (std::is_same_v<T, LinearPotential>) {
          return make_linear(f.b, f.c - f.b.dot(a));
        } else if constexpr (std::is_same_v<T, BarrierPotential>) {
          return make_barrier(f.center + a, f.radius, f.scale, f.offset);
        } else if constexpr (std::is_same_v<T, GridPotentialData>) {
          GridPotentialData g = f;
          g.grid.origin += a;
          return Potential(Potential::Form{std::move(g)}, phi.dim());
        } else if constexpr (std::is_same_v<T, RestrictedPotential>) {
          return make_restricted(translate_potential(*f.base, a), translate_body(f.body, a));
        } else if constexpr (std::is_same_v<T, SupportPotential>) {
          fail("translate_potential: support potentials are conjugates, translate the source instead");
        } else if constexpr (std::is_same_v<T, InfConvPotential>) {
          InfConvPotential g = f;
          g.outer = translate_potential(*f.outer, a).shared();
          return Potential(Potential::Form{std::move(g)}, phi.dim());
        } else {
          DilatedPotential g = f;
          g.base = translate_potential(*f.base, a * (1.0 / f.t)).shared();
          return Potential(Potential::Form{std::move(g)}, phi.dim());
        }
      },
      phi.form());
}

Potential dilate_potential(const Potential& phi, double t) {
  require(t > 0, "dilate_potential: factor must be positive");
  if (t == 1) return phi;
  return std::visit(
      [&](const auto& f) -> Potential {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, QuadraticPotential>) {
          return make_quadratic(f.A.times(1.0 / t), f.b, f.c * t);
        } else if constexpr (std::is_same_v<T, PowerNormPotential>) {
          return make_power_norm(f.coeff * std::pow(t, 1.0 - f.exponent), f.exponent, f.center * t,
                                 f.tilt, f.offset * t);
        } else if constexpr (std::is_same_v<T, LinearPotential>) {
          return make_linear(f.b, f.c * t);
        } else if constexpr (std::is_same_v<T, BarrierPotential>) {
          return make_barrier(f.center * t, f.radius * t, f.scale * t, f.offset * t);
        } else if constexpr (std::is_same_v<T, RestrictedPotential>) {
          return make_restricted(dilate_potential(*f.base, t), scale_body(f.body, t));
        } else if constexpr (std::is_same_v<T, InfConvPotential>) {
          InfConvPotential g = f;
          g.outer = dilate_potential(*f.outer, t).shared();
          g.t = f.t * t;
          return Potential(Potential::Form{std::move(g)}, phi.dim());
        } else if constexpr (std::is_same_v<T, DilatedPotential>) {
          return Potential(Potential::Form{DilatedPotential{f.base, f.t * t}}, phi.dim());
        } else {
          return Potential(Potential::Form{DilatedPotential{phi.shared(), t}}, phi.dim());
        }
      },
      phi.form());
}

std::vector<double> potential_axis_kinks(const Potential& phi, int axis) {
  return std::visit(
      [&](const auto& f) -> std::vector<double> {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PowerNormPotential>) {
          if (f.exponent < 2) return {f.center[axis]};
          return {};
        } else if constexpr (std::is_same_v<T, BarrierPotential>) {
          return {f.center[axis]};
        } else if constexpr (std::is_same_v<T, RestrictedPotential>) {
          auto ks = potential_axis_kinks(*f.base, axis);
          Vec e = Vec::zero(phi.dim());
          e[axis] = 1;
          double hi = support_function(f.body, e);
          e[axis] = -1;
          double lo = -support_function(f.body, e);
          if (std::isfinite(lo)) ks.push_back(lo);
          if (std::isfinite(hi)) ks.push_back(hi);
          return ks;
        } else if constexpr (std::is_same_v<T, InfConvPotential>) {
          auto base = potential_axis_kinks(*f.outer, axis);
          Vec e = Vec::zero(phi.dim());
          e[axis] = 1;
          double zhi = support_function(f.inner_domain, e);
          e[axis] = -1;
          double zlo = -support_function(f.inner_domain, e);
          std::vector<double> out;
          for (double k : base) {
            if (std::isfinite(zlo)) out.push_back(k + f.t * zlo);
            if (std::isfinite(zhi)) out.push_back(k + f.t * zhi);
            out.push_back(k);
          }
          // the support boundary of the outer part also shifts by t * inner extremes
          auto dom = potential_domain(*f.outer);
          if (!dom.is_all_space()) {
            e[axis] = 1;
            double dhi = support_function(dom, e);
            e[axis] = -1;
            double dlo = -support_function(dom, e);
            for (double d : {dlo, dhi}) {
              if (!std::isfinite(d)) continue;
              if (std::isfinite(zlo)) out.push_back(d + f.t * zlo);
              if (std::isfinite(zhi)) out.push_back(d + f.t * zhi);
            }
          }
          return out;
        } else if constexpr (std::is_same_v<T, DilatedPotential>) {
          auto ks = potential_axis_kinks(*f.base, axis);
          for (auto& k : ks) k *= f.t;
          return ks;
        } else {
          return {};
        }
      },
      phi.form());
}

std::optional<PolarStructure> potential_polar_structure(const Potential& phi) {
  return std::visit(
      [&](const auto& f) -> std::optional<PolarStructure> {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PowerNormPotential>) {
          for (int i = 0; i < phi.dim(); ++i)
            if (f.tilt[i] != 0) return std::nullopt;
          PolarStructure p{f.center, {}};
          if (f.exponent < 2) p.radii.push_back(0);
          return p;
        } else if constexpr (std::is_same_v<T, BarrierPotential>) {
          return PolarStructure{f.center, {0}};
        } else if constexpr (std::is_same_v<T, QuadraticPotential>) {
          double a = f.A.at(0, 0);
          if (a <= 0) return std::nullopt;
          for (int i = 0; i < phi.dim(); ++i)
            for (int j = 0; j < phi.dim(); ++j)
              if (std::abs(f.A.at(i, j) - (i == j ? a : 0.0)) > 0) return std::nullopt;
          return PolarStructure{f.b * (-1.0 / a), {}};
        } else if constexpr (std::is_same_v<T, RestrictedPotential>) {
          auto base = potential_polar_structure(*f.base);
          if (!base) return std::nullopt;
          const auto* ball = std::get_if<Ball>(&f.body.form());
          if (!ball || dist(ball->center, base->center) > 0) return std::nullopt;
          base->radii.push_back(ball->radius);
          return base;
        } else if constexpr (std::is_same_v<T, InfConvPotential>) {
          const auto* ball = std::get_if<Ball>(&f.inner_domain.form());
          std::optional<PolarStructure> outer = potential_polar_structure(*f.outer);
          if (const auto* q = std::get_if<QuadraticPotential>(&f.outer->form());
              q && !outer && q->A.positive_definite() && ball) {
            // anisotropic quadratic eroded by a ball: the constrained/unconstrained
            // switch happens on a Euclidean sphere around the quadratic center
            Vec m = q->A.inverse().mul(q->b * -1.0);
            return PolarStructure{m + ball->center * f.t, {f.t * ball->radius}};
          }
          if (!outer || !ball) return std::nullopt;
          PolarStructure p{outer->center + ball->center * f.t, {}};
          double br = f.t * ball->radius;
          p.radii.push_back(br);
          for (double r : outer->radii) {
            p.radii.push_back(r + br);
            if (r - br > 0) p.radii.push_back(r - br);
          }
          return p;
        } else if constexpr (std::is_same_v<T, DilatedPotential>) {
          auto base = potential_polar_structure(*f.base);
          if (!base) return std::nullopt;
          base->center = base->center * f.t;
          for (auto& r : base->radii) r *= f.t;
          return base;
        } else {
          return std::nullopt;
        }
      },
      phi.form());
}

// --- log-concave function helpers -------------------------------------------

LogConcaveFn standard_gaussian(int dim) {
  return LogConcaveFn(make_quadratic(Mat::identity(dim), Vec::zero(dim), 0));
}

LogConcaveFn exponential_norm(int dim, double coeff, double exponent) {
  return LogConcaveFn(make_power_norm(coeff, exponent, Vec::zero(dim)));
}

LogConcaveFn indicator_fn(const ConvexBody& K, double log_height) {
  return LogConcaveFn(make_indicator(K, log_height), K);
}

LogConcaveFn half_exponential(int dim, const Vec& slope) {
  Vec lo = Vec::zero(dim), hi(dim);
  for (int i = 0; i < dim; ++i) hi[i] = kInf;
  ConvexBody orthant = ConvexBody(ConvexBody::Form{Box{lo, hi}});
  return LogConcaveFn(make_restricted(make_linear(slope, 0), orthant), orthant);
}

LogConcaveFn translate_fn(const LogConcaveFn& f, const Vec& a) {
  return LogConcaveFn(translate_potential(f.potential(), a), translate_body(f.support(), a));
}

LogConcaveFn scale_fn(const LogConcaveFn& f, double log_factor) {
  // e^{c} f shifts the potential by -c
  return std::visit(
      [&](const auto& form) -> LogConcaveFn {
        using T = std::decay_t<decltype(form)>;
        if constexpr (std::is_same_v<T, QuadraticPotential>) {
          return LogConcaveFn(make_quadratic(form.A, form.b, form.c - log_factor), f.support());
        } else if constexpr (std::is_same_v<T, PowerNormPotential>) {
          return LogConcaveFn(
              make_power_norm(form.coeff, form.exponent, form.center, form.tilt, form.offset - log_factor),
              f.support());
        } else if constexpr (std::is_same_v<T, LinearPotential>) {
          return LogConcaveFn(make_linear(form.b, form.c - log_factor), f.support());
        } else if constexpr (std::is_same_v<T, BarrierPotential>) {
          return LogConcaveFn(make_barrier(form.center, form.radius, form.scale, form.offset - log_factor),
                              f.support());
        } else if constexpr (std::is_same_v<T, RestrictedPotential>) {
          LogConcaveFn base(*form.base);
          return LogConcaveFn(
              make_restricted(scale_fn(base, log_factor).potential(), form.body), f.support());
        } else if constexpr (std::is_same_v<T, GridPotentialData>) {
          GridPotentialData g = form;
          for (auto& v : g.values)
            if (std::isfinite(v)) v -= log_factor;
          return LogConcaveFn(Potential(Potential::Form{std::move(g)}, f.dim()), f.support());
        } else {
          fail("scale_fn: unsupported potential form");
        }
      },
      f.potential().form());
}

bool convexity_sample_check(const Potential& phi, const std::vector<Vec>& probes, double tol) {
  for (const auto& x : probes)
    for (const auto& y : probes) {
      double fx = potential_value(phi, x), fy = potential_value(phi, y);
      if (!std::isfinite(fx) || !std::isfinite(fy)) continue;
      for (double lam : {0.25, 0.5, 0.75}) {
        double mid = potential_value(phi, x * (1 - lam) + y * lam);
        if (mid > (1 - lam) * fx + lam * fy + tol) return false;
      }
    }
  return true;
}

}  // namespace lcgeo

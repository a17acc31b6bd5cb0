#include "lcgeo/transform.hpp"

#include <algorithm>
#include <cmath>

#include "lcgeo/kernels.hpp"

namespace lcgeo {

namespace {

// out[k] = sup_j (ys[k] xs[j] - vals[j]); +inf entries of vals are skipped,
// an empty column yields -inf.
std::vector<double> conj1d(const std::vector<double>& xs, const std::vector<double>& vals,
                           const std::vector<double>& ys) {
  std::vector<double> out(ys.size(), -kInf);
  kernels::indexed_for(ys.size(), [&](size_t k) {
    double y = ys[k], best = -kInf;
    for (size_t j = 0; j < xs.size(); ++j) {
      double v = vals[j];
      if (!std::isfinite(v)) continue;
      best = std::max(best, y * xs[j] - v);
    }
    out[k] = best;
  });
  return out;
}

std::vector<double> axis_coords(const GridSpec& g, int axis) {
  std::vector<double> xs(static_cast<size_t>(g.counts[static_cast<size_t>(axis)]));
  for (size_t i = 0; i < xs.size(); ++i) xs[i] = g.coord(axis, static_cast<int>(i));
  return xs;
}

// factorized discrete Legendre transform onto the query lattice
GridPotentialData grid_conjugate(const GridSpec& sample, const std::vector<double>& vals,
                                 const GridSpec& query) {
  const int n = sample.dim;
  GridPotentialData out;
  out.grid = query;
  if (n == 1) {
    out.values = conj1d(axis_coords(sample, 0), vals, axis_coords(query, 0));
    return out;
  }
  auto xs1 = axis_coords(sample, 0), xs2 = axis_coords(sample, 1);
  auto ys1 = axis_coords(query, 0), ys2 = axis_coords(query, 1);
  const size_t N1 = xs1.size(), N2 = xs2.size(), M1 = ys1.size(), M2 = ys2.size();
  // stage 1: conjugate in x1 for every x2 column, evaluated at all y1
  std::vector<double> stage(M1 * N2);
  kernels::indexed_for(N2, [&](size_t j2) {
    std::vector<double> col(N1);
    for (size_t j1 = 0; j1 < N1; ++j1) col[j1] = vals[j2 * N1 + j1];
    auto c = conj1d(xs1, col, ys1);
    for (size_t k1 = 0; k1 < M1; ++k1) stage[j2 * M1 + k1] = c[k1];
  });
  // stage 2: conjugate in x2 of -stage for every fixed y1
  out.values.assign(M1 * M2, -kInf);
  kernels::indexed_for(M1, [&](size_t k1) {
    std::vector<double> col(N2);
    for (size_t j2 = 0; j2 < N2; ++j2) {
      double s = stage[j2 * M1 + k1];
      col[j2] = std::isfinite(s) ? -s : kInf;  // -(-inf) would be an empty column
    }
    auto c = conj1d(xs2, col, ys2);
    for (size_t k2 = 0; k2 < M2; ++k2) out.values[k2 * M1 + k1] = c[k2];
  });
  return out;
}

}  // namespace

std::optional<Potential> legendre_transform_closed(const Potential& phi) {
  const int n = phi.dim();
  return std::visit(
      [&](const auto& f) -> std::optional<Potential> {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, QuadraticPotential>) {
          if (!f.A.positive_definite()) return std::nullopt;
          Mat M = f.A.inverse();
          Vec mb = M.mul(f.b);
          return make_quadratic(M, -mb, 0.5 * f.b.dot(mb) - f.c);
        } else if constexpr (std::is_same_v<T, PowerNormPotential>) {
          if (f.exponent == 1) {
            // conjugate of a tilted cone: indicator of a ball around the tilt
            return make_restricted(make_linear(f.center, -f.center.dot(f.tilt) - f.offset),
                                   make_ball(f.tilt, f.coeff));
          }
          double q = f.exponent / (f.exponent - 1.0);
          double beta = std::pow(f.coeff * f.exponent, -q / f.exponent) / q;
          return make_power_norm(beta, q, f.tilt, f.center, -f.center.dot(f.tilt) - f.offset);
        } else if constexpr (std::is_same_v<T, LinearPotential>) {
          return make_restricted(make_linear(Vec::zero(n), -f.c), make_point(f.b));
        } else if constexpr (std::is_same_v<T, RestrictedPotential>) {
          if (const auto* l = std::get_if<LinearPotential>(&f.base->form()))
            return make_support_potential(f.body, l->b, -l->c);
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, SupportPotential>) {
          return make_restricted(make_linear(f.anchor, -f.offset), f.body);
        } else {
          return std::nullopt;
        }
      },
      phi.form());
}

Potential legendre_transform(const Potential& phi, const GridSpec& query, int sample_n) {
  if (auto closed = legendre_transform_closed(phi)) return *closed;
  const int n = phi.dim();
  require(n == query.dim, "legendre_transform: query dimension mismatch");

  if (const auto* g = std::get_if<GridPotentialData>(&phi.form())) {
    auto out = grid_conjugate(g->grid, g->values, query);
    return Potential(Potential::Form{std::move(out)}, n);
  }

  // sample the potential over a box where the gradient range covers the query
  double ymax = 1e-9;
  for (int i = 0; i < n; ++i)
    ymax = std::max({ymax, std::abs(query.coord(i, 0)),
                     std::abs(query.coord(i, query.counts[static_cast<size_t>(i)] - 1))});
  ConvexBody dom = potential_domain(phi);
  Vec x0 = dom.interior_point();
  auto [blo, bhi] = bounding_box(dom);
  Vec lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    double r = 1;
    if (!std::isfinite(blo[i]) || !std::isfinite(bhi[i])) {
      for (int it = 0; it < 60; ++it) {
        // enough radius that every unbounded ray has slope beyond 2 ymax
        bool ok = true;
        for (double sgn : {-1.0, 1.0}) {
          Vec u = Vec::zero(n);
          u[i] = sgn;
          double vfar = potential_value(phi, x0 + u * r);
          double vmid = potential_value(phi, x0 + u * (0.5 * r));
          if (std::isfinite(vfar) && (vfar - vmid) / (0.5 * r) < 2 * ymax) ok = false;
        }
        if (ok) break;
        r *= 2;
      }
    }
    lo[i] = std::isfinite(blo[i]) ? blo[i] : x0[i] - r;
    hi[i] = std::isfinite(bhi[i]) ? bhi[i] : x0[i] + r;
  }
  int counts = sample_n > 0 ? sample_n : (n == 1 ? 4097 : 513);
  GridSpec sample = GridSpec::over(lo, hi, {counts, n > 1 ? counts : 1, 1});
  std::vector<double> vals(sample.size());
  kernels::indexed_for(sample.size(), [&](size_t k) { vals[k] = potential_value(phi, sample.node(k)); });
  auto out = grid_conjugate(sample, vals, query);
  return Potential(Potential::Form{std::move(out)}, n);
}

SupportFn SupportFn::closed(Potential conj) {
  SupportFn s;
  s.conj_ = std::move(conj);
  s.prov_ = Provenance::closed_form;
  return s;
}

SupportFn SupportFn::gridded(Potential conj_grid, std::shared_ptr<const GridPotentialData> source) {
  SupportFn s;
  s.conj_ = std::move(conj_grid);
  s.prov_ = Provenance::grid_conjugate;
  s.source_ = std::move(source);
  return s;
}

double SupportFn::operator()(const Vec& y) const {
  require(conj_.valid(), "SupportFn: empty");
  double v = potential_value(conj_, y);
  if (std::isfinite(v) || prov_ == Provenance::closed_form || !source_) return v;
  // outside the tabulated window: direct discrete conjugate of the source
  double best = -kInf;
  for (size_t k = 0; k < source_->values.size(); ++k) {
    double s = source_->values[k];
    if (!std::isfinite(s)) continue;
    best = std::max(best, y.dot(source_->grid.node(k)) - s);
  }
  return best;
}

SupportFn support_function_of(const LogConcaveFn& g) {
  double mv = potential_min_value(g.potential());
  require(std::isfinite(mv), "support_function_of: potential unbounded below");
  auto closed = legendre_transform_closed(g.potential());
  require(closed.has_value(),
          "support_function_of: no closed-form conjugate; supply a query window");
  return SupportFn::closed(*closed);
}

SupportFn support_function_of(const LogConcaveFn& g, const GridSpec& query, int sample_n) {
  if (auto closed = legendre_transform_closed(g.potential())) return SupportFn::closed(*closed);
  Potential conj = legendre_transform(g.potential(), query, sample_n);
  const auto* data = std::get_if<GridPotentialData>(&conj.form());
  require(data != nullptr, "support_function_of: grid conjugate expected");

  // keep the raw source samples so out-of-window queries stay finite
  std::shared_ptr<const GridPotentialData> src;
  if (const auto* gsrc = std::get_if<GridPotentialData>(&g.potential().form())) {
    src = std::make_shared<const GridPotentialData>(*gsrc);
  } else {
    ConvexBody dom = potential_domain(g.potential());
    auto [lo, hi] = bounding_box(dom);
    const int n = g.dim();
    bool finite = true;
    for (int i = 0; i < n; ++i) finite = finite && std::isfinite(lo[i]) && std::isfinite(hi[i]);
    if (finite) {
      int counts = n == 1 ? 2049 : 257;
      GridSpec s = GridSpec::over(lo, hi, {counts, n > 1 ? counts : 1, 1});
      GridPotentialData d;
      d.grid = s;
      d.values.resize(s.size());
      const Potential phi = g.potential();
      kernels::indexed_for(s.size(), [&](size_t k) { d.values[k] = potential_value(phi, s.node(k)); });
      src = std::make_shared<const GridPotentialData>(std::move(d));
    }
  }
  return SupportFn::gridded(std::move(conj), std::move(src));
}

}  // namespace lcgeo

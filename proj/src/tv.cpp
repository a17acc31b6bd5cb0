#include "lcgeo/tv.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lcgeo/quadrature_rule.hpp"

namespace lcgeo {

double GridField::max_value() const {
  double m = 0;
  for (double v : values) m = std::max(m, v);
  return m;
}

GridField sample_field(const LogConcaveFn& f, const Vec& lo, const Vec& hi, int nodes_per_axis) {
  const int n = f.dim();
  require(n >= 1 && n <= 2, "sample_field: fields are 1D or 2D");
  GridField field;
  field.spec = GridSpec::over(lo, hi, {nodes_per_axis, n > 1 ? nodes_per_axis : 1, 1});
  field.values.resize(field.spec.size());
  double edge_max = 0;
  kernels::indexed_for(field.spec.size(), [&](size_t k) { field.values[k] = f(field.spec.node(k)); });
  // enforce the two-cell zero margin
  for (size_t k = 0; k < field.spec.size(); ++k) {
    Vec x = field.spec.node(k);
    bool margin = false;
    for (int i = 0; i < n; ++i) {
      double u = (x[i] - lo[i]) / field.spec.spacing[i];
      double m = field.spec.counts[static_cast<size_t>(i)] - 1.0;
      if (u < 1.5 || u > m - 1.5) margin = true;
    }
    if (margin) {
      edge_max = std::max(edge_max, field.values[k]);
      field.values[k] = 0;
    }
  }
  require(edge_max <= 1e-3 * std::max(field.max_value(), 1e-300),
          "sample_field: support is not inside the lattice margin");
  return field;
}

bool field_log_concave(const GridField& field, double tol) {
  const auto& g = field.spec;
  auto at = [&](int i, int j) { return field.values[g.flatten({i, j, 0})]; };
  // along-axis midpoint test v_k^2 >= v_{k-1} v_{k+1} (up to tol)
  const int n0 = g.counts[0], n1 = g.dim > 1 ? g.counts[1] : 1;
  for (int j = 0; j < n1; ++j)
    for (int i = 1; i + 1 < n0; ++i)
      if (at(i, j) * at(i, j) + tol < at(i - 1, j) * at(i + 1, j)) return false;
  if (g.dim > 1)
    for (int i = 0; i < n0; ++i)
      for (int j = 1; j + 1 < n1; ++j)
        if (at(i, j) * at(i, j) + tol < at(i, j - 1) * at(i, j + 1)) return false;
  return true;
}

double tv_grid(const GridField& field, const ConvexBody& L) {
  return tv_grid(field, L, kernels::default_exec());
}

double tv_grid(const GridField& field, const ConvexBody& L, kernels::Exec mode) {
  require(L.origin_interior(), "tv_grid: L must contain the origin in its interior");
  const auto& g = field.spec;
  const double h = g.spacing[0];
  if (g.dim == 1) {
    const size_t cells = static_cast<size_t>(g.counts[0] - 1);
    return kernels::indexed_sum(
        cells,
        [&](size_t i) {
          double d = (field.values[i + 1] - field.values[i]) / h;
          if (d == 0) return 0.0;
          return support_function(L, Vec{-d}) * h;
        },
        mode);
  }
  require(std::abs(g.spacing[1] - h) < 1e-12 * h, "tv_grid: anisotropic spacing unsupported");
  const size_t c0 = static_cast<size_t>(g.counts[0] - 1);
  const size_t c1 = static_cast<size_t>(g.counts[1] - 1);
  const size_t stride = static_cast<size_t>(g.counts[0]);
  return kernels::indexed_sum(
      c0 * c1,
      [&](size_t c) {
        size_t i = c % c0, j = c / c0;
        size_t base = j * stride + i;
        double dx = (field.values[base + 1] - field.values[base]) / h;
        double dy = (field.values[base + stride] - field.values[base]) / h;
        if (dx == 0 && dy == 0) return 0.0;
        return support_function(L, Vec{-dx, -dy}) * h * h;
      },
      mode);
}

TVDecomposition tv_representation(const LogConcaveFn& f, const ConvexBody& L,
                                  const QuadratureSpec& spec) {
  require(L.origin_interior(), "tv_representation: L must contain the origin in its interior");
  TVDecomposition d;
  DiscreteMeasure mu = moment_measure(f, spec);
  DiscreteMeasure nu = boundary_measure(f, spec);
  auto hL = [&](const Vec& y) { return support_function(L, y); };
  d.gradient_part = integrate_measure(mu, hL);
  d.boundary_part = integrate_measure(nu, hL);
  return d;
}

// --- divergence identity -------------------------------------------------

namespace {

double bump(double u) {
  if (u <= -1 || u >= 1) return 0;
  double w = 1 - u * u;
  return w * w * w;
}
double bump_prime(double u) {
  if (u <= -1 || u >= 1) return 0;
  double w = 1 - u * u;
  return -6 * u * w * w;
}

struct BumpBox {
  Vec lo, hi;
  double scaled(const Vec& x, int i) const { return (2 * x[i] - lo[i] - hi[i]) / (hi[i] - lo[i]); }
  double value(const Vec& x) const {
    double b = 1;
    for (int i = 0; i < x.dim; ++i) b *= bump(scaled(x, i));
    return b;
  }
  Vec grad(const Vec& x) const {
    Vec g(x.dim);
    for (int i = 0; i < x.dim; ++i) {
      double gi = bump_prime(scaled(x, i)) * 2.0 / (hi[i] - lo[i]);
      for (int j = 0; j < x.dim; ++j)
        if (j != i) gi *= bump(scaled(x, j));
      g[i] = gi;
    }
    return g;
  }
};

TestField make_field(std::string name, int dim, BumpBox box, std::function<Vec(const Vec&)> dir,
                     std::function<double(const Vec&)> dir_div) {
  TestField f;
  f.name = std::move(name);
  f.dim = dim;
  f.lo = box.lo;
  f.hi = box.hi;
  f.value = [box, dir](const Vec& x) { return dir(x) * box.value(x); };
  f.divergence = [box, dir, dir_div](const Vec& x) {
    return dir_div(x) * box.value(x) + dir(x).dot(box.grad(x));
  };
  return f;
}

}  // namespace

std::vector<TestField> test_field_catalog(int dim) {
  std::vector<TestField> out;
  if (dim == 1) {
    BumpBox b1{Vec{-1.3}, Vec{1.7}};
    BumpBox b2{Vec{-2.2}, Vec{0.9}};
    BumpBox b3{Vec{0.1}, Vec{2.3}};
    out.push_back(make_field("const-bump", 1, b1, [](const Vec& x) { return Vec{0.8} * 1.0 + x * 0.0; },
                             [](const Vec&) { return 0.0; }));
    out.push_back(make_field("ramp-bump", 1, b2, [](const Vec& x) { return x; },
                             [](const Vec&) { return 1.0; }));
    out.push_back(make_field("shifted-bump", 1, b3, [](const Vec& x) { return Vec{-0.6} + x * 0.0; },
                             [](const Vec&) { return 0.0; }));
    out.push_back(make_field("narrow-bump", 1, BumpBox{Vec{-0.4}, Vec{0.5}},
                             [](const Vec& x) { return Vec{0.9} + x * 0.0; },
                             [](const Vec&) { return 0.0; }));
    out.push_back(make_field("quad-bump", 1, BumpBox{Vec{-1.8}, Vec{1.8}},
                             [](const Vec& x) { return Vec{x[0] * x[0] * 0.3}; },
                             [](const Vec& x) { return 0.6 * x[0]; }));
    return out;
  }
  require(dim == 2, "test_field_catalog: 1D and 2D only");
  BumpBox s1{Vec{-1.4, -1.2}, Vec{1.5, 1.3}};
  BumpBox s2{Vec{-1.0, -1.6}, Vec{2.0, 1.1}};
  BumpBox s3{Vec{-0.6, -0.5}, Vec{0.8, 0.9}};
  out.push_back(make_field("const-dir", 2, s1,
                           [](const Vec& x) { return Vec{0.7, -0.4} + x * 0.0; },
                           [](const Vec&) { return 0.0; }));
  out.push_back(make_field("radial", 2, s2, [](const Vec& x) { return x * 0.5; },
                           [](const Vec&) { return 1.0; }));
  out.push_back(make_field("rotation", 2, s1,
                           [](const Vec& x) { return Vec{-x[1], x[0]}; },
                           [](const Vec&) { return 0.0; }));
  out.push_back(make_field("shear", 2, s3,
                           [](const Vec& x) { return Vec{0.3 * x[0] + 0.5 * x[1], -0.2 * x[1]}; },
                           [](const Vec&) { return 0.1; }));
  out.push_back(make_field("offset-dir", 2, s2,
                           [](const Vec& x) { return Vec{0.2 * (x[1] - 0.3), 0.6} + x * 0.0; },
                           [](const Vec&) { return 0.0; }));
  return out;
}

double field_max_gauge(const TestField& field, const ConvexBody& L) {
  double m = 0;
  const int n = field.dim;
  const int steps = n == 1 ? 4096 : 160;
  std::array<int, 3> tops{steps, n > 1 ? steps : 0, 0};
  std::array<int, 3> idx{0, 0, 0};
  for (idx[1] = 0; idx[1] <= tops[1]; ++idx[1])
    for (idx[0] = 0; idx[0] <= tops[0]; ++idx[0]) {
      Vec x(n);
      for (int i = 0; i < n; ++i)
        x[i] = field.lo[i] + (field.hi[i] - field.lo[i]) * idx[static_cast<size_t>(i)] / steps;
      Vec v = field.value(x);
      if (v.norm() > 0) m = std::max(m, gauge_norm(L, v));
    }
  return m;
}

TestField scale_field(const TestField& field, double factor) {
  TestField out = field;
  auto value = field.value;
  auto divergence = field.divergence;
  out.value = [value, factor](const Vec& x) { return value(x) * factor; };
  out.divergence = [divergence, factor](const Vec& x) { return divergence(x) * factor; };
  return out;
}

DivergencePairing divergence_pairing_check(const LogConcaveFn& f, const TestField& field,
                                           const QuadratureSpec& spec) {
  require(f.dim() == field.dim, "divergence_pairing_check: dimension mismatch");
  QuadratureSpec s = spec;
  for (int i = 0; i < f.dim(); ++i) {
    s.extra_splits[static_cast<size_t>(i)].push_back(field.lo[i]);
    s.extra_splits[static_cast<size_t>(i)].push_back(field.hi[i]);
  }
  DivergencePairing out;
  out.lhs = integrate_weighted(f, s, field.divergence);
  const Potential phi = f.potential();
  out.gradient_term = integrate_weighted(f, s, [&](const Vec& x) {
    Vec v = field.value(x);
    if (v.norm() == 0) return 0.0;
    return potential_gradient(phi, x).grad.dot(v);
  });
  out.boundary_term = boundary_integral(
      f, s, [&](const Vec& x, const Vec& normal) { return field.value(x).dot(normal); });
  return out;
}

// --- level sets and coarea -------------------------------------------------

namespace {

ConvexBody clip_halfspace(const ConvexBody& K, const Vec& a, double b) {
  const int n = K.dim();
  if (n == 1) {
    auto [lo, hi] = bounding_box(K);
    double l = lo[0], h = hi[0];
    require(a[0] != 0, "clip_halfspace: trivial normal");
    if (a[0] > 0) h = std::min(h, b / a[0]);
    else l = std::max(l, b / a[0]);
    require(l <= h && std::isfinite(l) && std::isfinite(h), "clip_halfspace: empty or unbounded");
    return make_interval(l, h);
  }
  if (const auto* p = std::get_if<Polytope>(&K.form())) {
    require(n == 2, "clip_halfspace: 2D polytopes only");
    // Sutherland-Hodgman against <a, x> <= b
    std::vector<Vec> out;
    const auto& V = p->vertices;
    for (size_t i = 0; i < V.size(); ++i) {
      const Vec& cur = V[i];
      const Vec& nxt = V[(i + 1) % V.size()];
      double dc = a.dot(cur) - b, dn = a.dot(nxt) - b;
      if (dc <= 0) out.push_back(cur);
      if ((dc < 0 && dn > 0) || (dc > 0 && dn < 0)) {
        double t = dc / (dc - dn);
        out.push_back(cur + (nxt - cur) * t);
      }
    }
    require(!out.empty(), "clip_halfspace: empty level set");
    return make_polytope(2, std::move(out));
  }
  if (const auto* bx = std::get_if<Box>(&K.form())) {
    int axis = -1, nonzero = 0;
    for (int i = 0; i < n; ++i)
      if (a[i] != 0) {
        axis = i;
        ++nonzero;
      }
    if (nonzero == 1) {
      Box c = *bx;
      if (a[axis] > 0) c.hi[axis] = std::min(c.hi[axis], b / a[axis]);
      else c.lo[axis] = std::max(c.lo[axis], b / a[axis]);
      require(c.lo[axis] <= c.hi[axis], "clip_halfspace: empty level set");
      ConvexBody cb(ConvexBody::Form{c});
      require(cb.bounded(), "clip_halfspace: unbounded level set");
      return cb;
    }
    // orthant-type box against a positive normal: a simplex
    bool orthant = true;
    for (int i = 0; i < n; ++i)
      orthant = orthant && std::isfinite(bx->lo[i]) && !std::isfinite(bx->hi[i]) && a[i] > 0;
    require(orthant && n == 2, "clip_halfspace: unsupported box clip");
    double slack = b - a.dot(bx->lo);
    require(slack >= 0, "clip_halfspace: empty level set");
    std::vector<Vec> verts{bx->lo};
    for (int i = 0; i < n; ++i) {
      Vec v = bx->lo;
      v[i] += slack / a[i];
      verts.push_back(v);
    }
    return make_polytope(n, std::move(verts));
  }
  fail("clip_halfspace: unsupported body");
}

}  // namespace

ConvexBody level_set(const LogConcaveFn& f, double s) {
  require(s > 0, "level_set: level must be positive");
  const double level = -std::log(s);  // { phi <= level }
  const Potential& phi = f.potential();
  const int n = f.dim();
  double mn = potential_min_value(phi);
  require(level >= mn, "level_set: empty level set");
  return std::visit(
      [&](const auto& form) -> ConvexBody {
        using T = std::decay_t<decltype(form)>;
        if constexpr (std::is_same_v<T, QuadraticPotential>) {
          require(form.A.positive_definite(), "level_set: degenerate quadratic");
          Vec m = form.A.inverse().mul(-form.b);
          double rho2 = 2.0 * (level - mn);
          if (rho2 <= 0) rho2 = 1e-30;
          return make_ellipsoid(m, form.A.inverse().times(rho2));
        } else if constexpr (std::is_same_v<T, PowerNormPotential>) {
          bool tilt0 = true;
          for (int i = 0; i < n; ++i) tilt0 = tilt0 && form.tilt[i] == 0;
          require(tilt0, "level_set: tilted power norms unsupported");
          double r = std::pow(std::max(level - form.offset, 0.0) / form.coeff, 1.0 / form.exponent);
          if (r <= 0) r = 1e-15;
          if (n == 1) return make_interval(form.center[0] - r, form.center[0] + r);
          return make_ball(form.center, r);
        } else if constexpr (std::is_same_v<T, BarrierPotential>) {
          double w = std::max(level - form.offset, 0.0) / form.scale;
          double r = form.radius * w / (1.0 + w);
          if (r <= 0) r = 1e-15;
          if (n == 1) return make_interval(form.center[0] - r, form.center[0] + r);
          return make_ball(form.center, r);
        } else if constexpr (std::is_same_v<T, RestrictedPotential>) {
          if (const auto* l = std::get_if<LinearPotential>(&form.base->form())) {
            bool bz = true;
            for (int i = 0; i < n; ++i) bz = bz && l->b[i] == 0;
            if (bz) {
              require(level >= l->c, "level_set: empty level set");
              return form.body;
            }
            return clip_halfspace(form.body, l->b, level - l->c);
          }
          fail("level_set: unsupported restricted potential");
        } else {
          fail("level_set: no closed-form level sets for this potential");
        }
      },
      phi.form());
}

ConvexBody level_set_grid(const GridField& field, double s) {
  require(s > 0 && s <= field.max_value(), "level_set_grid: level out of range");
  const auto& g = field.spec;
  const int n = g.dim;
  std::vector<Vec> corners;
  double hx = g.spacing[0] / 2;
  if (n == 1) {
    for (int i = 0; i < g.counts[0]; ++i)
      if (field.values[static_cast<size_t>(i)] >= s) {
        corners.push_back(Vec{g.coord(0, i) - hx});
        corners.push_back(Vec{g.coord(0, i) + hx});
      }
  } else {
    double hy = g.spacing[1] / 2;
    for (int j = 0; j < g.counts[1]; ++j) {
      int lo = -1, hi = -1;
      for (int i = 0; i < g.counts[0]; ++i)
        if (field.values[g.flatten({i, j, 0})] >= s) {
          if (lo < 0) lo = i;
          hi = i;
        }
      if (lo < 0) continue;
      double y = g.coord(1, j);
      for (int i : {lo, hi}) {
        double x = g.coord(0, i);
        corners.push_back(Vec{x - hx, y - hy});
        corners.push_back(Vec{x + hx, y - hy});
        corners.push_back(Vec{x - hx, y + hy});
        corners.push_back(Vec{x + hx, y + hy});
      }
    }
  }
  require(!corners.empty(), "level_set_grid: empty level set");
  return make_polytope(n, std::move(corners));
}

namespace {

template <class PerFn>
double layered_integral(double smax, const CoareaOptions& opts, PerFn per) {
  const auto& gl = gauss_legendre(opts.s_order);
  std::vector<std::pair<double, double>> nodes;  // (s, weight)
  for (int j = 0; j < opts.s_panels; ++j) {
    double hi = smax * std::pow(2.0, -j);
    double lo = j + 1 == opts.s_panels ? 0.0 : smax * std::pow(2.0, -j - 1);
    for (size_t q = 0; q < gl.nodes.size(); ++q) {
      nodes.emplace_back(0.5 * (lo + hi) + 0.5 * (hi - lo) * gl.nodes[q],
                         0.5 * (hi - lo) * gl.weights[q]);
    }
  }
  std::vector<double> vals(nodes.size());
  std::exception_ptr err;
  kernels::indexed_for(nodes.size(), [&](size_t i) {
    try {
      vals[i] = per(nodes[i].first);
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
      err = std::current_exception();
      vals[i] = 0;
    }
  });
  if (err) std::rethrow_exception(err);
  double total = 0;
  for (size_t i = 0; i < nodes.size(); ++i) total += nodes[i].second * vals[i];
  return total;
}

}  // namespace

double layered_perimeter_integral(const LogConcaveFn& f, const ConvexBody& L,
                                  const CoareaOptions& opts) {
  double smax = std::exp(-potential_min_value(f.potential()));
  return layered_integral(smax, opts,
                          [&](double s) { return anisotropic_perimeter(level_set(f, s), L, false); });
}

double layered_perimeter_integral(const GridField& field, const ConvexBody& L,
                                  const CoareaOptions& opts) {
  require(field_log_concave(field, 1e-9), "layered_perimeter_integral: field is not log-concave");
  double smax = field.max_value();
  return layered_integral(smax, opts, [&](double s) {
    return anisotropic_perimeter(level_set_grid(field, s), L, false);
  });
}

CoareaResult coarea_check(const LogConcaveFn& f, const GridField& field, const ConvexBody& L,
                          const CoareaOptions& opts) {
  CoareaResult r;
  r.tv = tv_grid(field, L);
  r.layered = layered_perimeter_integral(f, L, opts);
  return r;
}

CoareaResult coarea_check(const GridField& field, const ConvexBody& L, const CoareaOptions& opts) {
  CoareaResult r;
  r.tv = tv_grid(field, L);
  r.layered = layered_perimeter_integral(field, L, opts);
  return r;
}

std::string field_csv(const GridField& field) {
  std::ostringstream os;
  const auto& g = field.spec;
  os << "dim," << g.dim << "\n";
  char buf[64];
  os << "origin";
  for (int i = 0; i < g.dim; ++i) {
    snprintf(buf, sizeof buf, "%.17g", g.origin[i]);
    os << "," << buf;
  }
  os << "\nspacing";
  for (int i = 0; i < g.dim; ++i) {
    snprintf(buf, sizeof buf, "%.17g", g.spacing[i]);
    os << "," << buf;
  }
  os << "\ncounts";
  for (int i = 0; i < g.dim; ++i) os << "," << g.counts[static_cast<size_t>(i)];
  os << "\n";
  for (size_t k = 0; k < field.values.size(); ++k) {
    snprintf(buf, sizeof buf, "%.17g", field.values[k]);
    os << buf << ((k + 1) % static_cast<size_t>(g.counts[0]) == 0 ? "\n" : ",");
  }
  return os.str();
}

GridField field_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  GridField f;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::istringstream ls(s);
    std::string tok;
    while (std::getline(ls, tok, ',')) out.push_back(tok);
    return out;
  };
  require(static_cast<bool>(std::getline(is, line)), "field_from_csv: missing header");
  auto d = split(line);
  require(d.size() == 2 && d[0] == "dim", "field_from_csv: bad dim row");
  int dim = std::stoi(d[1]);
  require(dim == 1 || dim == 2, "field_from_csv: dim must be 1 or 2");
  std::getline(is, line);
  auto orow = split(line);
  std::getline(is, line);
  auto srow = split(line);
  std::getline(is, line);
  auto crow = split(line);
  require(orow.size() == static_cast<size_t>(dim) + 1 && srow.size() == orow.size() &&
              crow.size() == orow.size(),
          "field_from_csv: bad header rows");
  f.spec.dim = dim;
  f.spec.origin = Vec(dim);
  f.spec.spacing = Vec(dim);
  for (int i = 0; i < dim; ++i) {
    f.spec.origin[i] = std::stod(orow[static_cast<size_t>(i) + 1]);
    f.spec.spacing[i] = std::stod(srow[static_cast<size_t>(i) + 1]);
    f.spec.counts[static_cast<size_t>(i)] = std::stoi(crow[static_cast<size_t>(i) + 1]);
  }
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    for (const auto& tok : split(line)) f.values.push_back(std::stod(tok));
  }
  require(f.values.size() == f.spec.size(), "field_from_csv: payload size mismatch");
  return f;
}

}  // namespace lcgeo

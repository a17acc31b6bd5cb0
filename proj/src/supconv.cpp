#include "lcgeo/supconv.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "lcgeo/detail/infconv_eval.hpp"

namespace lcgeo {

namespace detail {

namespace {

// Quasiconvex 1D minimization by nested grid scans; deterministic and robust
// against +inf plateaus at the interval ends.
double nested_scan_1d(const std::function<double(double)>& J, double lo, double hi,
                      double* arg = nullptr) {
  if (!(hi > lo)) {
    if (arg) *arg = lo;
    return J(lo);
  }
  double best = kInf, bx = lo;
  auto scan = [&](double a, double b, int m) {
    for (int i = 0; i <= m; ++i) {
      double x = a + (b - a) * i / m;
      double v = J(x);
      if (v < best) best = v, bx = x;
    }
  };
  scan(lo, hi, 128);
  double w = (hi - lo) / 128;
  for (int round = 0; round < 6; ++round) {
    double a = std::max(lo, bx - 2 * w), b = std::min(hi, bx + 2 * w);
    scan(a, b, 32);
    w = (b - a) / 32;
  }
  if (arg) *arg = bx;
  return best;
}

struct AxisQuad {
  double a = 0, b = 0;       // 1/2 a u^2 + b u along this axis
  double lo = -kInf, hi = kInf;  // domain interval
};

// Separable decomposition: diagonal quadratics and linear potentials,
// optionally restricted to a box.
std::optional<std::pair<std::vector<AxisQuad>, double>> separable_decomposition(const Potential& p) {
  const Potential* base = &p;
  Vec blo, bhi;
  bool boxed = false;
  if (const auto* r = std::get_if<RestrictedPotential>(&p.form())) {
    const auto* bx = std::get_if<Box>(&r->body.form());
    if (!bx) return std::nullopt;
    blo = bx->lo;
    bhi = bx->hi;
    boxed = true;
    base = r->base.get();
  }
  const int n = p.dim();
  std::vector<AxisQuad> axes(static_cast<size_t>(n));
  double cst = 0;
  if (const auto* q = std::get_if<QuadraticPotential>(&base->form())) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && std::abs(q->A.at(i, j)) > 0) return std::nullopt;
    for (int i = 0; i < n; ++i) {
      axes[static_cast<size_t>(i)].a = q->A.at(i, i);
      axes[static_cast<size_t>(i)].b = q->b[i];
    }
    cst = q->c;
  } else if (const auto* l = std::get_if<LinearPotential>(&base->form())) {
    for (int i = 0; i < n; ++i) axes[static_cast<size_t>(i)].b = l->b[i];
    cst = l->c;
  } else {
    return std::nullopt;
  }
  if (boxed)
    for (int i = 0; i < n; ++i) {
      axes[static_cast<size_t>(i)].lo = blo[i];
      axes[static_cast<size_t>(i)].hi = bhi[i];
    }
  return std::make_pair(axes, cst);
}

// min over u in [lo, hi] of 1/2 a u^2 + b u; assumes lo <= hi and a >= 0
double axis_min(const AxisQuad& q, double lo, double hi) {
  double l = std::max(lo, q.lo), h = std::min(hi, q.hi);
  if (l > h) return kInf;
  double u;
  if (q.a > 0) u = std::clamp(-q.b / q.a, l, h);
  else u = q.b >= 0 ? l : h;
  if (!std::isfinite(u)) return -kInf;  // linear runoff; caller guards
  return 0.5 * q.a * u * u + q.b * u;
}

}  // namespace

double minimize_over_body(const std::function<double(const Vec&)>& obj, const ConvexBody& domain,
                          Vec* argmin) {
  require(domain.bounded(), "minimize_over_body: domain must be bounded");
  const int n = domain.dim();
  auto [lo, hi] = bounding_box(domain);
  Vec best_x = domain.interior_point();
  double best = obj(best_x);
  auto scan = [&](const Vec& a, const Vec& b, int m) {
    std::array<int, 3> idx{0, 0, 0};
    std::array<int, 3> tops{m, n > 1 ? m : 0, n > 2 ? m : 0};
    for (idx[2] = 0; idx[2] <= tops[2]; ++idx[2])
      for (idx[1] = 0; idx[1] <= tops[1]; ++idx[1])
        for (idx[0] = 0; idx[0] <= tops[0]; ++idx[0]) {
          Vec x(n);
          for (int i = 0; i < n; ++i)
            x[i] = a[i] + (b[i] - a[i]) * idx[static_cast<size_t>(i)] / m;
          double v = obj(x);
          if (v < best) best = v, best_x = x;
        }
  };
  scan(lo, hi, n == 1 ? 128 : 32);
  Vec w = (hi - lo) * (n == 1 ? 1.0 / 128 : 1.0 / 32);
  for (int round = 0; round < 6; ++round) {
    Vec a(n), b(n);
    for (int i = 0; i < n; ++i) {
      a[i] = std::max(lo[i], best_x[i] - 2 * w[i]);
      b[i] = std::min(hi[i], best_x[i] + 2 * w[i]);
    }
    scan(a, b, 16);
    for (int i = 0; i < n; ++i) w[i] = (b[i] - a[i]) / 16;
  }
  if (argmin) *argmin = best_x;
  return best;
}

double infconv_value(const InfConvPotential& ic, int dim, const Vec& x) {
  const Potential& outer = *ic.outer;
  const Potential& inner = *ic.inner;
  const double t = ic.t;
  switch (ic.strategy) {
    case kClamp1D: {
      auto [zl, zh] = bounding_box(ic.inner_domain);
      auto [dl, dh] = bounding_box(potential_domain(outer));
      double ulo = std::max(x[0] - t * zh[0], dl[0]);
      double uhi = std::min(x[0] - t * zl[0], dh[0]);
      if (ulo > uhi) return kInf;
      double u = std::clamp(ic.outer_min_point[0], ulo, uhi);
      return potential_value(outer, Vec{u}) + t * ic.inner_const;
    }
    case kRadialBall: {
      const auto* ball = std::get_if<Ball>(&ic.inner_domain.form());
      Vec p = x - ball->center * t - ic.outer_min_point;
      double r = p.norm();
      double d = std::max(r - t * ball->radius, 0.0);
      Vec point = ic.outer_min_point;
      if (r > 0 && d > 0) point += p * (d / r);
      return potential_value(outer, point) + t * ic.inner_const;
    }
    case kQuadBall: {
      const auto* q = std::get_if<QuadraticPotential>(&outer.form());
      const auto* ball = std::get_if<Ball>(&ic.inner_domain.form());
      Vec m = ic.outer_min_point;
      double dmin = potential_value(outer, m);
      Vec p = x - ball->center * t - m;
      double R = t * ball->radius;
      if (p.norm() <= R) return dmin + t * ic.inner_const;
      std::array<double, 3> lam{};
      Mat Q(dim);
      sym_eigen(q->A, lam, Q);
      Vec pe(dim);
      for (int i = 0; i < dim; ++i) {
        double s = 0;
        for (int r = 0; r < dim; ++r) s += Q.at(r, i) * p[r];
        pe[i] = s;
      }
      // solve sum (lam_i pe_i / (lam_i + nu))^2 = R^2, nu > 0
      auto sigma = [&](double nu) {
        double s = 0;
        for (int i = 0; i < dim; ++i) {
          double v = lam[static_cast<size_t>(i)] * pe[i] / (lam[static_cast<size_t>(i)] + nu);
          s += v * v;
        }
        return s;
      };
      double nu_hi = 1;
      while (sigma(nu_hi) > R * R && nu_hi < 1e300) nu_hi *= 2;
      double nu_lo = 0;
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (nu_lo + nu_hi);
        (sigma(mid) > R * R ? nu_lo : nu_hi) = mid;
      }
      double nu = 0.5 * (nu_lo + nu_hi);
      double val = 0;
      for (int i = 0; i < dim; ++i) {
        double vi = nu * pe[i] / (lam[static_cast<size_t>(i)] + nu);
        val += 0.5 * lam[static_cast<size_t>(i)] * vi * vi;
      }
      return val + dmin + t * ic.inner_const;
    }
    case kSepBox: {
      auto dec = separable_decomposition(outer);
      auto [zl, zh] = bounding_box(ic.inner_domain);
      double total = dec->second + t * ic.inner_const;
      for (int i = 0; i < dim; ++i) {
        double v = axis_min(dec->first[static_cast<size_t>(i)], x[i] - t * zh[i], x[i] - t * zl[i]);
        if (v == kInf) return kInf;
        total += v;
      }
      return total;
    }
    case kProjDist: {
      // indicator outer, centered radial inner: c + t psi(dist(x, K)/t along a ray)
      Vec p = project_onto(ic.outer_body, x);
      double d = dist(x, p) / t;
      Vec probe = Vec::zero(dim);
      probe[0] = d;
      return ic.inner_const + t * potential_value(inner, probe);
    }
    case kGolden1D: {
      auto [zl, zh] = bounding_box(ic.inner_domain);
      require(std::isfinite(zl[0]) && std::isfinite(zh[0]),
              "sup_convolve: inner support must be compact for the search path");
      auto J = [&](double z) {
        return potential_value(outer, Vec{x[0] - t * z}) + t * potential_value(inner, Vec{z});
      };
      return nested_scan_1d(J, zl[0], zh[0]);
    }
    default: {  // kScan
      require(ic.inner_domain.bounded(), "sup_convolve: inner support must be compact for the search path");
      auto J = [&](const Vec& z) {
        double iv = potential_value(inner, z);
        if (!std::isfinite(iv)) return kInf;
        return potential_value(outer, x - z * t) + t * iv;
      };
      return minimize_over_body(J, ic.inner_domain, nullptr);
    }
  }
}

}  // namespace detail

LogConcaveFn dilate(const LogConcaveFn& g, double t) {
  require(t > 0, "dilate: factor must be positive");
  return LogConcaveFn(dilate_potential(g.potential(), t), scale_body(g.support(), t));
}

namespace {

// indicator with height e^{-c0}: restricted zero-slope linear base
std::optional<double> indicator_constant(const Potential& p) {
  const auto* r = std::get_if<RestrictedPotential>(&p.form());
  if (!r) return std::nullopt;
  const auto* l = std::get_if<LinearPotential>(&r->base->form());
  if (!l) return std::nullopt;
  for (int i = 0; i < p.dim(); ++i)
    if (l->b[i] != 0) return std::nullopt;
  return l->c;
}

std::optional<Vec> radial_center(const Potential& p) {
  if (const auto* pn = std::get_if<PowerNormPotential>(&p.form())) {
    for (int i = 0; i < p.dim(); ++i)
      if (pn->tilt[i] != 0) return std::nullopt;
    return pn->center;
  }
  if (const auto* b = std::get_if<BarrierPotential>(&p.form())) return b->center;
  if (const auto* q = std::get_if<QuadraticPotential>(&p.form())) {
    double a = q->A.at(0, 0);
    if (a <= 0) return std::nullopt;
    for (int i = 0; i < p.dim(); ++i)
      for (int j = 0; j < p.dim(); ++j)
        if (std::abs(q->A.at(i, j) - (i == j ? a : 0.0)) > 0) return std::nullopt;
    return q->b * (-1.0 / a);
  }
  return std::nullopt;
}

// 1D minimizer of a convex potential over its domain
Vec anchor_1d(const Potential& p) {
  if (auto m = potential_minimizer(p); m && std::isfinite(potential_value(p, *m))) return *m;
  if (const auto* r = std::get_if<RestrictedPotential>(&p.form())) {
    auto [dl, dh] = bounding_box(r->body);
    if (const auto* l = std::get_if<LinearPotential>(&r->base->form())) {
      double end = l->b[0] >= 0 ? dl[0] : dh[0];
      require(std::isfinite(end), "sup_convolve: potential unbounded below");
      return Vec{end};
    }
    if (auto bm = potential_minimizer(*r->base)) return Vec{std::clamp((*bm)[0], dl[0], dh[0])};
  }
  fail("sup_convolve: could not locate the 1D potential minimum");
}

std::optional<QuadraticPotential> full_quadratic(const Potential& p) {
  const auto* q = std::get_if<QuadraticPotential>(&p.form());
  if (q && q->A.positive_definite()) return *q;
  return std::nullopt;
}

}  // namespace

LogConcaveFn sup_convolve(const LogConcaveFn& f, const LogConcaveFn& g, double t) {
  require(f.dim() == g.dim(), "sup_convolve: dimension mismatch");
  require(t >= 0, "sup_convolve: t must be nonnegative");
  if (t == 0) return f;
  const int n = f.dim();
  const Potential& phi = f.potential();
  const Potential& psi = g.potential();
  ConvexBody support = minkowski_sum(f.support(), scale_body(g.support(), t));

  auto c_f = indicator_constant(phi);
  auto c_g = indicator_constant(psi);
  if (c_f && c_g)
    return LogConcaveFn(make_indicator(support, -(*c_f + t * *c_g)), support);

  if (auto q1 = full_quadratic(phi))
    if (auto q2 = full_quadratic(psi)) {
      // dilated second summand stays quadratic; infimal convolution of
      // positive-definite quadratics is quadratic with harmonic-sum Hessian
      Mat A2 = q2->A.times(1.0 / t);
      Vec m1 = q1->A.inverse().mul(-q1->b);
      Vec m2 = A2.inverse().mul(-q2->b);
      double d1 = 0.5 * q1->A.quad(m1) + q1->b.dot(m1) + q1->c;
      double d2 = 0.5 * A2.quad(m2) + q2->b.dot(m2) + q2->c * t;
      Mat H = q1->A.inverse().plus(A2.inverse()).inverse();
      Vec m = m1 + m2;
      double c = d1 + d2 + 0.5 * H.quad(m);
      return LogConcaveFn(make_quadratic(H, H.mul(m) * -1.0, c), support);
    }

  InfConvPotential ic;
  ic.outer = phi.shared();
  ic.inner = psi.shared();
  ic.t = t;
  ic.inner_domain = g.support();
  ic.strategy = detail::kScan;
  ic.outer_min_point = Vec::zero(n);

  if (c_g) {
    ic.inner_const = *c_g;
    const auto* quad = std::get_if<QuadraticPotential>(&phi.form());
    const bool g_ball = std::get_if<Ball>(&g.support().form()) != nullptr;
    auto rc = radial_center(phi);
    if (n == 1) {
      ic.strategy = detail::kClamp1D;
      ic.outer_min_point = anchor_1d(phi);
    } else if (rc && g_ball) {
      ic.strategy = detail::kRadialBall;
      ic.outer_min_point = *rc;
    } else if (quad && quad->A.positive_definite() && g_ball) {
      ic.strategy = detail::kQuadBall;
      ic.outer_min_point = quad->A.inverse().mul(quad->b * -1.0);
    } else if (detail::separable_decomposition(phi) &&
               std::get_if<Box>(&g.support().form()) != nullptr && g.support().bounded()) {
      ic.strategy = detail::kSepBox;
    }
  } else if (c_f) {
    // indicator f against a centered radial g: distance formula via projection
    if (auto rc = radial_center(psi); rc && (std::get_if<Box>(&f.support().form()) ||
                                             std::get_if<Ball>(&f.support().form()) ||
                                             std::get_if<Polytope>(&f.support().form()))) {
      bool centered = true;
      for (int i = 0; i < n; ++i) centered = centered && (*rc)[i] == 0;
      if (centered) {
        ic.strategy = detail::kProjDist;
        ic.outer_body = f.support();
        ic.inner_const = *c_f;
      }
    }
    if (ic.strategy == detail::kScan && n == 1 && g.support().bounded()) ic.strategy = detail::kGolden1D;
  } else if (n == 1) {
    ic.strategy = detail::kGolden1D;
  }

  Potential pot(Potential::Form{std::move(ic)}, n);
  return LogConcaveFn(std::move(pot), support);
}

}  // namespace lcgeo

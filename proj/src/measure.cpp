#include "lcgeo/measure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lcgeo/kernels.hpp"
#include "lcgeo/quadrature_rule.hpp"

namespace lcgeo {

namespace {

std::optional<double> indicator_constant(const Potential& p) {
  const auto* r = std::get_if<RestrictedPotential>(&p.form());
  if (!r) return std::nullopt;
  const auto* l = std::get_if<LinearPotential>(&r->base->form());
  if (!l) return std::nullopt;
  for (int i = 0; i < p.dim(); ++i)
    if (l->b[i] != 0) return std::nullopt;
  return l->c;
}

// facet truncation length so the envelope tail on an unbounded facet ray is
// negligible at the working tolerance
double facet_truncation(const EnvelopeBound& env, double tail_rel) {
  return (env.log_amplitude - std::log(tail_rel) + 46.0) / env.decay + 1.0;
}

// Gauss panels over [a, b]
void panel_nodes(double a, double b, int panels, int order, std::vector<double>& xs,
                 std::vector<double>& ws) {
  const auto& gl = gauss_legendre(order);
  for (int p = 0; p < panels; ++p) {
    double lo = a + (b - a) * p / panels, hi = a + (b - a) * (p + 1) / panels;
    for (size_t q = 0; q < gl.nodes.size(); ++q) {
      xs.push_back(0.5 * (lo + hi) + 0.5 * (hi - lo) * gl.nodes[q]);
      ws.push_back(0.5 * (hi - lo) * gl.weights[q]);
    }
  }
}

}  // namespace

double DiscreteMeasure::total_mass() const {
  return kernels::indexed_sum(atoms.size(), [&](size_t i) { return atoms[i].weight; });
}

DiscreteMeasure surface_area_measure(const ConvexBody& K) {
  DiscreteMeasure m;
  m.dim = K.dim();
  m.domain = MeasureDomain::sphere;
  m.kind = MeasureKind::facet_area;
  for (const auto& f : body_facets(K)) {
    require(std::isfinite(f.measure), "surface_area_measure: unbounded facet");
    m.atoms.push_back({f.normal, f.measure});
  }
  return m;
}

double integrate_measure(const DiscreteMeasure& m, const std::function<double(const Vec&)>& psi) {
  // 0 * inf is 0 here: zero-weight atoms cannot contribute
  double inf_part = 0;
  for (const auto& a : m.atoms) {
    if (a.weight <= 0) continue;
    double v = psi(a.point);
    if (v == kInf) inf_part = kInf;
  }
  if (inf_part == kInf) return kInf;
  return kernels::indexed_sum(m.atoms.size(), [&](size_t i) {
    return m.atoms[i].weight > 0 ? m.atoms[i].weight * psi(m.atoms[i].point) : 0.0;
  });
}

Vec measure_moment(const DiscreteMeasure& m) {
  Vec out(m.dim);
  for (int d = 0; d < m.dim; ++d) {
    const int dd = d;
    out[d] = kernels::indexed_sum(m.atoms.size(),
                                  [&](size_t i) { return m.atoms[i].weight * m.atoms[i].point[dd]; });
  }
  return out;
}

double measure_first_moment(const DiscreteMeasure& m) {
  return kernels::indexed_sum(m.atoms.size(),
                              [&](size_t i) { return m.atoms[i].weight * m.atoms[i].point.norm(); });
}

DiscreteMeasure moment_measure(const LogConcaveFn& f, const QuadratureSpec& spec) {
  DiscreteMeasure m;
  m.dim = f.dim();
  m.domain = MeasureDomain::euclidean;
  m.kind = MeasureKind::moment;
  const Potential& phi = f.potential();

  if (auto c = indicator_constant(phi)) {
    m.atoms.push_back({Vec::zero(f.dim()), std::exp(-*c) * volume(f.support())});
    return m;
  }
  // restricted linear potential: constant gradient, one exact atom
  if (const auto* r = std::get_if<RestrictedPotential>(&phi.form())) {
    if (const auto* l = std::get_if<LinearPotential>(&r->base->form())) {
      m.atoms.push_back({l->b, integrate(f, spec)});
      return m;
    }
  }
  // 1D |x|-type potential: two exact atoms carrying the side masses
  if (const auto* p = std::get_if<PowerNormPotential>(&phi.form());
      p && f.dim() == 1 && p->exponent == 1) {
    double a = p->coeff, tau = p->tilt[0], d = p->offset, mcenter = p->center[0];
    require(a > std::abs(tau), "moment_measure: potential not integrable");
    double base = std::exp(-d - tau * mcenter);
    m.atoms.push_back({Vec{tau - a}, base / (a - tau)});
    m.atoms.push_back({Vec{tau + a}, base / (a + tau)});
    return m;
  }

  QuadratureSpec s = spec;
  if (s.jitter == 0) s.jitter = 1e-9;
  InteriorRule rule = interior_rule(f, s);
  m.atoms.reserve(rule.nodes.size());
  long flagged = 0;
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    double fi = std::exp(-potential_value(phi, rule.nodes[i]));
    if (fi <= 0) continue;
    GradientResult g = potential_gradient(phi, rule.nodes[i]);
    if (g.flagged) {
      ++flagged;
      continue;
    }
    m.atoms.push_back({g.grad, rule.weights[i] * fi});
  }
  m.flagged_gradients = flagged;
  require(flagged <= static_cast<long>(rule.nodes.size() / 1000),
          "moment_measure: too many nondifferentiable nodes");
  return m;
}

namespace {

// integral of f(x) q(x, facet normal) over one facet
double facet_integral(const LogConcaveFn& f, const QuadratureSpec& spec, const Facet& fc,
                      const std::function<double(const Vec&, const Vec&)>& q) {
  const int n = f.dim();
  if (n == 1) {
    Vec x = fc.is_box_facet ? Vec{fc.value} : fc.verts.front();
    return f(x) * q(x, fc.normal);
  }
  if (!fc.is_box_facet) {
    if (n == 2) {
      const Vec& a = fc.verts[0];
      const Vec& b = fc.verts[1];
      std::vector<double> xs, ws;
      panel_nodes(0, 1, spec.panels, spec.order, xs, ws);
      double len = dist(a, b);
      double s = 0;
      for (size_t i = 0; i < xs.size(); ++i) {
        Vec x = a + (b - a) * xs[i];
        s += ws[i] * len * f(x) * q(x, fc.normal);
      }
      return s;
    }
    // 3D polygon facet: fan triangles, tensor Gauss on the collapsed square
    Vec c(n);
    for (const auto& v : fc.verts) c += v;
    c = c * (1.0 / static_cast<double>(fc.verts.size()));
    const auto& gl = gauss_legendre(spec.order);
    double s = 0;
    for (size_t e = 0; e < fc.verts.size(); ++e) {
      const Vec& a = fc.verts[e];
      const Vec& b = fc.verts[(e + 1) % fc.verts.size()];
      Vec cr{(a[1] - c[1]) * (b[2] - c[2]) - (a[2] - c[2]) * (b[1] - c[1]),
             (a[2] - c[2]) * (b[0] - c[0]) - (a[0] - c[0]) * (b[2] - c[2]),
             (a[0] - c[0]) * (b[1] - c[1]) - (a[1] - c[1]) * (b[0] - c[0])};
      double two_area = cr.norm();
      if (two_area <= 0) continue;
      for (size_t qu = 0; qu < gl.nodes.size(); ++qu) {
        double u = 0.5 * (gl.nodes[qu] + 1), wu = 0.5 * gl.weights[qu];
        for (size_t qv = 0; qv < gl.nodes.size(); ++qv) {
          double v = 0.5 * (gl.nodes[qv] + 1), wv = 0.5 * gl.weights[qv];
          Vec x = c + (a - c) * u + (b - a) * (u * v);
          s += wu * wv * u * two_area * f(x) * q(x, fc.normal);
        }
      }
    }
    return s;
  }
  // box facet, possibly unbounded: per-axis panels truncated by the envelope
  double T = facet_truncation(exponential_envelope(f), spec.tail_rel);
  std::vector<std::vector<double>> xs, ws;
  std::vector<int> axes;
  for (int i = 0; i < n; ++i) {
    if (i == fc.axis) continue;
    double lo = fc.range_lo[i], hi = fc.range_hi[i];
    if (!std::isfinite(lo)) lo = -T;
    if (!std::isfinite(hi)) hi = T;
    std::vector<double> x1, w1;
    panel_nodes(lo, hi, spec.panels, spec.order, x1, w1);
    xs.push_back(std::move(x1));
    ws.push_back(std::move(w1));
    axes.push_back(i);
  }
  if (axes.empty()) {
    Vec x(n);
    x[fc.axis] = fc.value;
    return f(x) * q(x, fc.normal);
  }
  double s = 0;
  if (axes.size() == 1) {
    for (size_t i = 0; i < xs[0].size(); ++i) {
      Vec x(n);
      x[fc.axis] = fc.value;
      x[axes[0]] = xs[0][i];
      s += ws[0][i] * f(x) * q(x, fc.normal);
    }
  } else {
    for (size_t i = 0; i < xs[0].size(); ++i)
      for (size_t j = 0; j < xs[1].size(); ++j) {
        Vec x(n);
        x[fc.axis] = fc.value;
        x[axes[0]] = xs[0][i];
        x[axes[1]] = xs[1][j];
        s += ws[0][i] * ws[1][j] * f(x) * q(x, fc.normal);
      }
  }
  return s;
}

// circle quadrature over a 2D ball boundary: accumulates w(x, outward normal)
double ball_boundary_sum(const Ball& b, const QuadratureSpec& spec,
                         const std::function<double(const Vec& x, const Vec& u, double w)>& take) {
  const auto& gl = gauss_legendre(spec.order);
  double s = 0;
  for (int p = 0; p < spec.angular_panels; ++p) {
    double a0 = 2 * M_PI * p / spec.angular_panels, a1 = 2 * M_PI * (p + 1) / spec.angular_panels;
    for (size_t qq = 0; qq < gl.nodes.size(); ++qq) {
      double a = 0.5 * (a0 + a1) + 0.5 * (a1 - a0) * gl.nodes[qq];
      double w = 0.5 * (a1 - a0) * gl.weights[qq] * b.radius;  // arc element
      Vec u{std::cos(a), std::sin(a)};
      s += take(b.center + u * b.radius, u, w);
    }
  }
  return s;
}

}  // namespace

double boundary_integral(const LogConcaveFn& f, const QuadratureSpec& spec,
                         const std::function<double(const Vec& x, const Vec& normal)>& q) {
  const ConvexBody& K = f.support();
  if (K.is_all_space()) return 0.0;
  if (std::get_if<Polytope>(&K.form()) || std::get_if<Box>(&K.form())) {
    double total = 0;
    for (const auto& fc : body_facets(K)) total += facet_integral(f, spec, fc, q);
    return total;
  }
  if (const auto* b = std::get_if<Ball>(&K.form())) {
    require(f.dim() == 2, "boundary_integral: ball boundaries handled in 2D");
    return ball_boundary_sum(*b, spec,
                             [&](const Vec& x, const Vec& u, double w) { return w * f(x) * q(x, u); });
  }
  fail("boundary_integral: unsupported support geometry");
}

DiscreteMeasure boundary_measure(const LogConcaveFn& f, const QuadratureSpec& spec) {
  DiscreteMeasure m;
  m.dim = f.dim();
  m.domain = MeasureDomain::sphere;
  m.kind = MeasureKind::boundary;
  const ConvexBody& K = f.support();
  if (K.is_all_space()) return m;

  if (std::get_if<Polytope>(&K.form()) || std::get_if<Box>(&K.form())) {
    auto one = [](const Vec&, const Vec&) { return 1.0; };
    for (const auto& fc : body_facets(K))
      m.atoms.push_back({fc.normal, facet_integral(f, spec, fc, one)});
    return m;
  }
  if (const auto* b = std::get_if<Ball>(&K.form())) {
    require(f.dim() == 2, "boundary_measure: ball supports handled in 2D");
    ball_boundary_sum(*b, spec, [&](const Vec& x, const Vec& u, double w) {
      double fv = f(x);
      if (fv > 0) m.atoms.push_back({u, w * fv});
      return 0.0;
    });
    return m;
  }
  fail("boundary_measure: unsupported support geometry");
}

Vec centering_defect(const LogConcaveFn& f, const QuadratureSpec& spec) {
  DiscreteMeasure mu = moment_measure(f, spec);
  DiscreteMeasure nu = boundary_measure(f, spec);
  return measure_moment(mu) + measure_moment(nu);
}

bool essentially_continuous(const LogConcaveFn& f, const QuadratureSpec& spec, double tol) {
  return boundary_measure(f, spec).total_mass() <= tol;
}

double boundary_mass_bound(const EnvelopeBound& env, int dim) {
  double sphere = dim == 1 ? 2.0 : (dim == 2 ? 2 * M_PI : 4 * M_PI);
  double fact = 1;
  for (int k = 1; k < dim; ++k) fact *= k;  // (n-1)!
  return env.amplitude() * env.decay * sphere * fact / std::pow(env.decay, dim);
}

std::string measure_csv(const DiscreteMeasure& m) {
  std::ostringstream os;
  for (int d = 0; d < m.dim; ++d) os << "x" << d << ",";
  os << "weight,domain\n";
  const char* tag = m.domain == MeasureDomain::sphere ? "sphere" : "euclidean";
  char buf[64];
  for (const auto& a : m.atoms) {
    for (int d = 0; d < m.dim; ++d) {
      snprintf(buf, sizeof buf, "%.17g", a.point[d]);
      os << buf << ",";
    }
    snprintf(buf, sizeof buf, "%.17g", a.weight);
    os << buf << "," << tag << "\n";
  }
  return os.str();
}

}  // namespace lcgeo

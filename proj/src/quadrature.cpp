#include "lcgeo/quadrature.hpp"

#include <algorithm>
#include <cmath>

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

Vec anchor_point(const LogConcaveFn& f) {
  try {
    if (auto m = potential_minimizer(f.potential());
        m && std::isfinite(potential_value(f.potential(), *m)))
      return *m;
  } catch (const std::exception&) {
  }
  return f.support().interior_point();
}

std::vector<Vec> sphere_directions(int dim, int count) {
  std::vector<Vec> dirs;
  if (dim == 1) {
    dirs.push_back(Vec{1});
    dirs.push_back(Vec{-1});
  } else if (dim == 2) {
    for (int k = 0; k < count; ++k) {
      double a = 2 * M_PI * (k + 0.13) / count;
      dirs.push_back(Vec{std::cos(a), std::sin(a)});
    }
  } else {
    for (int k = 0; k < count; ++k) {
      double z = 2.0 * (k + 0.5) / count - 1.0;
      double a = 2 * M_PI * 0.6180339887498949 * k;
      double r = std::sqrt(std::max(0.0, 1 - z * z));
      dirs.push_back(Vec{r * std::cos(a), r * std::sin(a), z});
    }
  }
  return dirs;
}

// envelope tail of A e^{-c|x|} outside radius R
double tail_outside(int n, double logA, double c, double R) {
  double poly;
  if (n == 1) poly = 2.0 / c;
  else if (n == 2) poly = 2 * M_PI * (R / c + 1.0 / (c * c));
  else poly = 4 * M_PI * (R * R / c + 2 * R / (c * c) + 2.0 / (c * c * c));
  return std::exp(logA - c * R) * poly;
}

struct PanelSet {
  std::vector<double> edges;  // ascending
};

PanelSet axis_panels(double lo, double hi, std::vector<double> splits, int base) {
  PanelSet p;
  std::sort(splits.begin(), splits.end());
  std::vector<double> seams{lo};
  for (double s : splits)
    if (s > lo + 1e-14 * (1 + std::abs(lo)) && s < hi - 1e-14 * (1 + std::abs(hi)) &&
        s - seams.back() > 1e-13 * (hi - lo))
      seams.push_back(s);
  seams.push_back(hi);
  for (size_t k = 0; k + 1 < seams.size(); ++k) {
    double a = seams[k], b = seams[k + 1];
    int m = std::max(1, static_cast<int>(std::lround(base * (b - a) / (hi - lo))));
    for (int i = 0; i < m; ++i) p.edges.push_back(a + (b - a) * i / m);
  }
  p.edges.push_back(hi);
  return p;
}

void gl_on_panels(const PanelSet& p, int order, std::vector<double>& xs, std::vector<double>& ws) {
  const auto& gl = gauss_legendre(order);
  for (size_t k = 0; k + 1 < p.edges.size(); ++k) {
    double a = p.edges[k], b = p.edges[k + 1];
    for (size_t q = 0; q < gl.nodes.size(); ++q) {
      xs.push_back(0.5 * (a + b) + 0.5 * (b - a) * gl.nodes[q]);
      ws.push_back(0.5 * (b - a) * gl.weights[q]);
    }
  }
}

}  // namespace

EnvelopeBound exponential_envelope(const LogConcaveFn& f) {
  const int n = f.dim();
  const Potential& phi = f.potential();

  if (const auto* ic = std::get_if<InfConvPotential>(&phi.form())) {
    // f * (t g) <= (sup g)^t e^{c t R_g} * envelope of f
    LogConcaveFn outer(*ic->outer);
    EnvelopeBound env = exponential_envelope(outer);
    double rg = ic->inner_domain.outer_radius();
    require(std::isfinite(rg), "exponential_envelope: non-compact direction support");
    double min_inner = potential_min_value(*ic->inner);
    env.log_amplitude += ic->t * (-min_inner) + env.decay * ic->t * rg;
    return env;
  }

  Vec x0 = anchor_point(f);
  require(std::isfinite(potential_value(phi, x0)), "exponential_envelope: anchor outside domain");

  const double R1 = 4, R2 = 8;
  double min_slope = kInf;
  auto dirs = sphere_directions(n, n == 1 ? 2 : (n == 2 ? 64 : 192));
  for (const auto& u : dirs) {
    double v1 = potential_value(phi, x0 + u * R1);
    double v2 = potential_value(phi, x0 + u * R2);
    if (!std::isfinite(v1) || !std::isfinite(v2)) continue;  // bounded direction
    min_slope = std::min(min_slope, (v2 - v1) / (R2 - R1));
  }
  double c = min_slope == kInf ? 1.0 : 0.9 * min_slope;
  if (!(c > 0)) fail("exponential_envelope: no positive decay (input not integrable)");

  // The sample must reach every finite support direction; beyond R2 the gap
  // c|x| - phi(x) decreases along unbounded rays since c undercuts the slope.
  double sample_radius = R2;
  {
    auto [blo, bhi] = bounding_box(f.support());
    for (int i = 0; i < n; ++i) {
      if (std::isfinite(blo[i])) sample_radius = std::max(sample_radius, std::abs(blo[i] - x0[i]));
      if (std::isfinite(bhi[i])) sample_radius = std::max(sample_radius, std::abs(bhi[i] - x0[i]));
    }
    sample_radius *= 1.3;
  }

  auto sup_gap = [&](int dir_count, int radial_count) {
    double m = -kInf;
    auto ds = sphere_directions(n, dir_count);
    for (const auto& u : ds)
      for (int i = 0; i <= radial_count; ++i) {
        Vec x = x0 + u * (sample_radius * i / radial_count);
        double v = potential_value(phi, x);
        if (!std::isfinite(v)) break;
        m = std::max(m, c * x.norm() - v);
      }
    return m;
  };

  double logA = sup_gap(n == 1 ? 2 : (n == 2 ? 96 : 320), 256) + std::log(1.25);
  for (int round = 0; round < 6; ++round) {
    double check = sup_gap(n == 1 ? 2 : (n == 2 ? 131 : 449), 307);
    if (check <= logA) return EnvelopeBound{logA, c};
    logA = check + std::log(2.0);
  }
  fail("exponential_envelope: could not verify the bound");
}

InteriorRule interior_rule(const LogConcaveFn& f, const QuadratureSpec& spec) {
  const int n = f.dim();
  const Potential& phi = f.potential();
  const ConvexBody& K = f.support();

  EnvelopeBound env = exponential_envelope(f);

  // truncation radius around the anchor; bootstrap the integral scale once
  Vec x0 = anchor_point(f);
  double fmax_log = -potential_value(phi, x0);
  auto radius_for = [&](double log_iest) {
    double R = 1;
    for (int it = 0; it < 60; ++it) {
      double t = tail_outside(n, env.log_amplitude, env.decay, R);
      if (t <= spec.tail_rel * std::exp(log_iest)) break;
      R *= 1.3;
    }
    return R;
  };
  // crude lower proxy for log integral: f(anchor) times a unit-ish cell,
  // refined below by an actual coarse pass when needed
  double R = radius_for(fmax_log - 20);

  std::vector<Vec> nodes;
  std::vector<double> weights;
  double extent = 0;

  auto tensor_rule = [&](const Vec& lo, const Vec& hi) {
    std::vector<std::vector<double>> xs(static_cast<size_t>(n)), ws(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      auto splits = potential_axis_kinks(phi, i);
      for (double s : spec.extra_splits[static_cast<size_t>(i)]) splits.push_back(s);
      PanelSet p = axis_panels(lo[i], hi[i], splits, spec.panels);
      gl_on_panels(p, spec.order, xs[static_cast<size_t>(i)], ws[static_cast<size_t>(i)]);
    }
    std::array<size_t, 3> m{xs[0].size(), n > 1 ? xs[1].size() : 1, n > 2 ? xs[2].size() : 1};
    nodes.reserve(m[0] * m[1] * m[2]);
    for (size_t k = 0; k < m[2]; ++k)
      for (size_t j = 0; j < m[1]; ++j)
        for (size_t i = 0; i < m[0]; ++i) {
          Vec x(n);
          double w = xs[0].empty() ? 0 : ws[0][i];
          x[0] = xs[0][i];
          if (n > 1) {
            x[1] = xs[1][j];
            w *= ws[1][j];
          }
          if (n > 2) {
            x[2] = xs[2][k];
            w *= ws[2][k];
          }
          nodes.push_back(x);
          weights.push_back(w);
        }
    for (int i = 0; i < n; ++i) extent = std::max({extent, std::abs(lo[i]), std::abs(hi[i])});
  };

  auto polar_rule = [&](const Vec& center, double rmax, std::vector<double> rsplits) {
    std::vector<double> rs, rw;
    PanelSet rp = axis_panels(0, rmax, std::move(rsplits), spec.panels);
    gl_on_panels(rp, spec.order, rs, rw);
    if (n == 2) {
      const auto& gl = gauss_legendre(spec.order);
      for (int p = 0; p < spec.angular_panels; ++p) {
        double a0 = 2 * M_PI * p / spec.angular_panels;
        double a1 = 2 * M_PI * (p + 1) / spec.angular_panels;
        for (size_t qa = 0; qa < gl.nodes.size(); ++qa) {
          double a = 0.5 * (a0 + a1) + 0.5 * (a1 - a0) * gl.nodes[qa];
          double wa = 0.5 * (a1 - a0) * gl.weights[qa];
          for (size_t qr = 0; qr < rs.size(); ++qr) {
            nodes.push_back(center + Vec{std::cos(a), std::sin(a)} * rs[qr]);
            weights.push_back(wa * rw[qr] * rs[qr]);
          }
        }
      }
    } else {  // n == 3: z = cos(theta) via GL, azimuth panels
      const auto& gl = gauss_legendre(spec.order);
      for (size_t qz = 0; qz < gl.nodes.size(); ++qz) {
        double z = gl.nodes[qz];
        double wz = gl.weights[qz];
        double rho = std::sqrt(std::max(0.0, 1 - z * z));
        for (int p = 0; p < spec.angular_panels; ++p) {
          double a = 2 * M_PI * (p + 0.5) / spec.angular_panels;
          double wa = 2 * M_PI / spec.angular_panels;
          for (size_t qr = 0; qr < rs.size(); ++qr) {
            nodes.push_back(center +
                            Vec{rho * std::cos(a), rho * std::sin(a), z} * rs[qr]);
            weights.push_back(wz * wa * rw[qr] * rs[qr] * rs[qr]);
          }
        }
      }
    }
    extent = center.norm() + rmax;
  };

  auto triangle_rule = [&](const Polytope& poly) {
    Vec c(n);
    for (const auto& v : poly.vertices) c += v;
    c = c * (1.0 / static_cast<double>(poly.vertices.size()));
    const auto& gl = gauss_legendre(std::max(spec.order, 24));
    for (size_t e = 0; e < poly.vertices.size(); ++e) {
      const Vec& a = poly.vertices[e];
      const Vec& b = poly.vertices[(e + 1) % poly.vertices.size()];
      double two_area = std::abs((a[0] - c[0]) * (b[1] - c[1]) - (b[0] - c[0]) * (a[1] - c[1]));
      if (two_area <= 0) continue;
      for (size_t qu = 0; qu < gl.nodes.size(); ++qu) {
        double u = 0.5 * (gl.nodes[qu] + 1), wu = 0.5 * gl.weights[qu];
        for (size_t qv = 0; qv < gl.nodes.size(); ++qv) {
          double v = 0.5 * (gl.nodes[qv] + 1), wv = 0.5 * gl.weights[qv];
          // collapsed map of the unit square onto triangle (c, a, b)
          Vec x = c + (a - c) * u + (b - a) * (u * v);
          nodes.push_back(x);
          weights.push_back(wu * wv * u * two_area);
        }
      }
    }
    extent = ConvexBody(ConvexBody::Form{poly}).outer_radius();
  };

  auto polar = potential_polar_structure(phi);
  const auto* ball = std::get_if<Ball>(&K.form());
  const auto* poly2 = std::get_if<Polytope>(&K.form());
  bool done = false;

  if (polar && n >= 2) {
    if (K.is_all_space()) {
      polar_rule(polar->center, R, polar->radii);
      done = true;
    } else if (ball && dist(ball->center, polar->center) < 1e-12 * (1 + ball->radius)) {
      polar_rule(polar->center, std::min(ball->radius, R), polar->radii);
      done = true;
    }
  }
  if (!done && (K.is_all_space() || std::get_if<Box>(&K.form()) ||
                (poly2 && n == 1))) {
    auto [blo, bhi] = bounding_box(K);
    Vec lo(n), hi(n);
    for (int i = 0; i < n; ++i) {
      lo[i] = std::isfinite(blo[i]) ? blo[i] : x0[i] - R;
      hi[i] = std::isfinite(bhi[i]) ? bhi[i] : x0[i] + R;
    }
    tensor_rule(lo, hi);
    done = true;
  }
  if (!done && poly2 && n == 2) {
    triangle_rule(*poly2);
    done = true;
  }
  if (!done && ball && n >= 2) {
    polar_rule(ball->center, std::min(ball->radius, R), {});
    done = true;
  }
  if (!done && std::get_if<Ellipsoid>(&K.form())) {
    // affine polar map through the shape square root
    const auto* el = std::get_if<Ellipsoid>(&K.form());
    std::array<double, 3> lam{};
    Mat Q(n);
    sym_eigen(el->shape, lam, Q);
    Mat sqrtM(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0;
        for (int k = 0; k < n; ++k)
          s += Q.at(i, k) * std::sqrt(std::max(0.0, lam[static_cast<size_t>(k)])) * Q.at(j, k);
        sqrtM.at(i, j) = s;
      }
    double jac = std::sqrt(el->shape.det());
    polar_rule(Vec::zero(n), 1.0, {});
    for (auto& x : nodes) x = el->center + sqrtM.mul(x);
    for (auto& w : weights) w *= jac;
    extent = el->center.norm() + std::sqrt(lam[0] + lam[1] + lam[2]);
    done = true;
  }
  if (!done) {
    // bounded sum bodies: tensor rule over the bounding box; the integrand
    // vanishes outside the support
    require(K.bounded(), "interior_rule: unsupported unbounded support");
    auto [blo, bhi] = bounding_box(K);
    tensor_rule(blo, bhi);
  }

  if (spec.jitter > 0) {
    for (size_t i = 0; i < nodes.size(); ++i)
      for (int d = 0; d < n; ++d)
        nodes[i][d] += spec.jitter * extent * seeded_unit(spec.jitter_seed, i * 7 + static_cast<size_t>(d));
  }

  InteriorRule rule;
  rule.nodes = std::move(nodes);
  rule.weights = std::move(weights);
  rule.extent = extent;
  rule.tail_bound =
      K.bounded() ? 0.0
                  : tail_outside(n, env.log_amplitude, env.decay, std::max(1e-6, R - x0.norm()));
  return rule;
}

double integrate(const LogConcaveFn& f, const QuadratureSpec& spec) {
  if (auto c = indicator_constant(f.potential())) {
    double v = volume(f.support());
    double val = std::exp(-*c) * v;
    require(val > 0, "integrate: zero integral");
    return val;
  }
  QuadratureSpec s = spec;
  s.jitter = 0;
  InteriorRule rule = interior_rule(f, s);
  const auto& nodes = rule.nodes;
  const auto& weights = rule.weights;
  const Potential phi = f.potential();
  double val = kernels::indexed_sum(nodes.size(), [&](size_t i) {
    return weights[i] * std::exp(-potential_value(phi, nodes[i]));
  });
  require(val > 0, "integrate: zero integral");
  require(rule.tail_bound <= 1e2 * spec.tail_rel * val,
          "integrate: truncation tail certificate failed");
  return val;
}

double integrate_weighted(const LogConcaveFn& f, const QuadratureSpec& spec,
                          const std::function<double(const Vec&)>& w) {
  QuadratureSpec s = spec;
  s.jitter = 0;
  InteriorRule rule = interior_rule(f, s);
  const Potential phi = f.potential();
  return kernels::indexed_sum(rule.nodes.size(), [&](size_t i) {
    return rule.weights[i] * w(rule.nodes[i]) * std::exp(-potential_value(phi, rule.nodes[i]));
  });
}

}  // namespace lcgeo

#include "lcgeo/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace lcgeo {

using nlohmann::json;

namespace {

double num_or_inf(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  fail(where + ": expected a number or \"inf\"/\"-inf\"");
}

Vec vec_from_json(const json& j, const std::string& where) {
  require(j.is_array() && !j.empty() && j.size() <= 3, (where + ": expected a 1-3 vector").c_str());
  Vec v(static_cast<int>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = num_or_inf(j[i], where);
  return v;
}

Mat mat_from_json(const json& j, const std::string& where) {
  require(j.is_array() && !j.empty() && j.size() <= 3, (where + ": expected a matrix").c_str());
  int n = static_cast<int>(j.size());
  Mat m(n);
  for (int r = 0; r < n; ++r) {
    require(j[static_cast<size_t>(r)].is_array() &&
                static_cast<int>(j[static_cast<size_t>(r)].size()) == n,
            (where + ": ragged matrix").c_str());
    for (int c = 0; c < n; ++c) m.at(r, c) = j[static_cast<size_t>(r)][static_cast<size_t>(c)].get<double>();
  }
  return m;
}

}  // namespace

ConvexBody body_from_json(const json& j, const std::string& where) {
  require(j.is_object() && j.contains("type"), (where + ": body needs a \"type\"").c_str());
  std::string type = j.at("type").get<std::string>();
  if (type == "interval") return make_interval(j.at("lo").get<double>(), j.at("hi").get<double>());
  if (type == "box") {
    Vec lo = vec_from_json(j.at("lo"), where + ".lo");
    Vec hi = vec_from_json(j.at("hi"), where + ".hi");
    return make_box(lo, hi);
  }
  if (type == "ball") {
    return make_ball(vec_from_json(j.at("center"), where + ".center"), j.at("radius").get<double>());
  }
  if (type == "polytope") {
    std::vector<Vec> verts;
    for (const auto& v : j.at("vertices")) verts.push_back(vec_from_json(v, where + ".vertices"));
    require(!verts.empty(), (where + ": polytope needs vertices").c_str());
    return make_polytope(verts.front().dim, std::move(verts));
  }
  if (type == "ellipsoid") {
    return make_ellipsoid(vec_from_json(j.at("center"), where + ".center"),
                          mat_from_json(j.at("shape"), where + ".shape"));
  }
  if (type == "point") return make_point(vec_from_json(j.at("at"), where + ".at"));
  if (type == "all") return make_all_space(j.at("dim").get<int>());
  fail(where + ": unknown body type \"" + type + "\"");
}

LogConcaveFn fn_from_json(const json& j, int dim, const std::string& where) {
  if (j.is_string()) {
    std::string name = j.get<std::string>();
    if (name == "gaussian") return standard_gaussian(dim);
    if (name == "laplace") return exponential_norm(dim, 1, 1);
    if (name == "half_exponential") {
      Vec slope(dim);
      for (int i = 0; i < dim; ++i) slope[i] = 1;
      return half_exponential(dim, slope);
    }
    fail(where + ": unknown function preset \"" + name + "\"");
  }
  require(j.is_object(), (where + ": expected a preset name or an object").c_str());

  LogConcaveFn fn;
  if (j.contains("indicator")) {
    ConvexBody K = body_from_json(j.at("indicator"), where + ".indicator");
    double h = j.value("log_height", 0.0);
    fn = indicator_fn(K, h);
  } else {
    require(j.contains("potential"), (where + ": needs \"potential\" or \"indicator\"").c_str());
    const json& p = j.at("potential");
    require(p.is_object() && p.contains("type"), (where + ".potential: needs a \"type\"").c_str());
    std::string type = p.at("type").get<std::string>();
    Potential phi;
    if (type == "quadratic") {
      Mat A = mat_from_json(p.at("matrix"), where + ".potential.matrix");
      Vec b = p.contains("linear") ? vec_from_json(p.at("linear"), where + ".potential.linear")
                                   : Vec::zero(A.dim);
      phi = make_quadratic(A, b, p.value("constant", 0.0));
    } else if (type == "power_norm") {
      Vec center = p.contains("center") ? vec_from_json(p.at("center"), where + ".potential.center")
                                        : Vec::zero(dim);
      Vec tilt = p.contains("tilt") ? vec_from_json(p.at("tilt"), where + ".potential.tilt")
                                    : Vec::zero(dim);
      phi = make_power_norm(p.value("coeff", 1.0), p.value("exponent", 1.0), center, tilt,
                            p.value("constant", 0.0));
    } else if (type == "linear") {
      phi = make_linear(vec_from_json(p.at("vector"), where + ".potential.vector"),
                        p.value("constant", 0.0));
    } else if (type == "barrier") {
      phi = make_barrier(vec_from_json(p.at("center"), where + ".potential.center"),
                         p.value("radius", 1.0), p.value("scale", 1.0), p.value("constant", 0.0));
    } else {
      fail(where + ".potential: unknown form \"" + type + "\"");
    }
    if (j.contains("support")) {
      ConvexBody K = body_from_json(j.at("support"), where + ".support");
      phi = make_restricted(phi, K);
    }
    fn = LogConcaveFn(std::move(phi));
  }
  if (j.contains("log_shift")) fn = scale_fn(fn, j.at("log_shift").get<double>());
  if (j.contains("shift")) fn = translate_fn(fn, vec_from_json(j.at("shift"), where + ".shift"));
  require(fn.dim() == dim, (where + ": dimension mismatch with the scenario").c_str());
  return fn;
}

namespace {

const std::vector<std::string> kKnownChecks = {
    "main-theorem", "coarea",     "quermass",          "centering",         "scaling",
    "pointwise",    "truncation", "uniqueness-sanity", "divergence-pairing", "levelset"};

double default_tolerance(const std::string& check, int dim) {
  if (check == "main-theorem") return 1e-2;
  if (check == "coarea") return dim == 1 ? 1e-2 : 3e-2;
  if (check == "quermass") return 1e-8;
  if (check == "levelset") return 1e-2;
  if (check == "truncation") return 1e-2;
  if (check == "uniqueness-sanity") return 1e-2;
  if (check == "divergence-pairing") return 1e-6;
  return 1e-6;
}

}  // namespace

Scenario scenario_from_json(const json& j) {
  Scenario s;
  require(j.is_object(), "scenario: expected an object");
  if (j.contains("schema_version")) {
    std::string v = j.at("schema_version").get<std::string>();
    require(v.substr(0, v.find('.')) == std::string(kSchemaVersion).substr(0, 1),
            "scenario: incompatible schema major version");
  }
  s.id = j.at("id").get<std::string>();
  s.dim = j.at("dim").get<int>();
  require(s.dim >= 1 && s.dim <= 3, "scenario: dim must be 1..3");
  s.f = fn_from_json(j.at("f"), s.dim, "f");

  // the integral gate: an envelope must exist and f must be positive somewhere
  try {
    exponential_envelope(s.f);
  } catch (const std::exception& e) {
    fail(std::string("scenario: integral of f not in (0, inf): ") + e.what());
  }

  if (j.contains("g")) s.g = fn_from_json(j.at("g"), s.dim, "g");
  if (j.contains("bodies"))
    for (const auto& [name, bj] : j.at("bodies").items())
      s.bodies.emplace(name, body_from_json(bj, "bodies." + name));

  if (j.contains("checks"))
    for (const auto& c : j.at("checks")) {
      std::string name = c.get<std::string>();
      require(std::find(kKnownChecks.begin(), kKnownChecks.end(), name) != kKnownChecks.end(),
              ("checks: unknown check \"" + name + "\"").c_str());
      s.checks.push_back(name);
    }

  for (const auto& c : s.checks) s.tolerances[c] = default_tolerance(c, s.dim);
  if (j.contains("tolerances"))
    for (const auto& [name, tj] : j.at("tolerances").items()) s.tolerances[name] = tj.get<double>();

  if (j.contains("quadrature")) {
    const json& q = j.at("quadrature");
    s.quadrature.panels = q.value("panels", s.quadrature.panels);
    s.quadrature.order = q.value("order", s.quadrature.order);
    s.quadrature.angular_panels = q.value("angular_panels", s.quadrature.angular_panels);
    s.quadrature.tail_rel = q.value("tail", s.quadrature.tail_rel);
    s.quadrature.jitter_seed = q.value("jitter_seed", s.quadrature.jitter_seed);
  }
  if (j.contains("schedule")) s.schedule.depth = j.at("schedule").value("depth", s.schedule.depth);

  if (j.contains("params")) {
    const json& p = j.at("params");
    if (p.contains("scaling_constants")) {
      s.scaling_constants.clear();
      for (const auto& c : p.at("scaling_constants")) s.scaling_constants.push_back(c.get<double>());
    }
    if (p.contains("truncation_radii")) {
      s.truncation_radii.clear();
      for (const auto& c : p.at("truncation_radii")) s.truncation_radii.push_back(c.get<double>());
    }
    if (p.contains("uniqueness_shift"))
      s.uniqueness_shift = vec_from_json(p.at("uniqueness_shift"), "params.uniqueness_shift");
    s.pointwise_points = p.value("pointwise_points", s.pointwise_points);
    s.grid_extent = p.value("grid_extent", s.grid_extent);
    s.grid_nodes = p.value("grid_nodes", s.grid_nodes);
    if (p.contains("coarea_bodies")) {
      s.coarea_bodies.clear();
      for (const auto& c : p.at("coarea_bodies")) s.coarea_bodies.push_back(c.get<std::string>());
    }
    s.coarea_halving = p.value("coarea_halving", s.coarea_halving);
  }
  if (s.uniqueness_shift.dim == 0) {
    s.uniqueness_shift = Vec::zero(s.dim);
    s.uniqueness_shift[0] = 0.7;
  }
  if (j.contains("expected"))
    for (const auto& [name, ej] : j.at("expected").items())
      if (ej.is_number()) s.expected[name] = ej.get<double>();

  s.echo = j;
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ("load_scenario: cannot open " + path).c_str());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    fail("load_scenario: parse error in " + path + ": " + e.what());
  }
  try {
    return scenario_from_json(j);
  } catch (const std::exception& e) {
    fail("load_scenario: " + path + ": " + e.what());
  }
}

std::vector<Scenario> load_corpus(const std::string& dir) {
  std::vector<std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.path().extension() == ".json") files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());
  std::vector<Scenario> out;
  for (const auto& f : files) out.push_back(load_scenario(f));
  return out;
}

// --- running ------------------------------------------------------------

namespace {

CheckRecord record(const std::string& name, double lhs, double rhs, double residual, double tol,
                   json diag = json::object()) {
  CheckRecord r;
  r.name = name;
  r.lhs = lhs;
  r.rhs = rhs;
  r.residual = residual;
  r.tolerance = tol;
  r.pass = residual <= tol;
  r.diagnostics = std::move(diag);
  return r;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1.0); }

const ConvexBody& named_body(const Scenario& s, const std::string& name) {
  auto it = s.bodies.find(name);
  require(it != s.bodies.end(), ("scenario references missing body \"" + name + "\"").c_str());
  return it->second;
}

void run_main_theorem(const Scenario& s, std::vector<CheckRecord>& out) {
  require(s.g.has_value(), "main-theorem requires g");
  double tol = s.tolerances.at("main-theorem");
  VariationReport rep = main_theorem_report(s.f, *s.g, s.schedule, s.quadrature);
  json diag;
  diag["mu_term"] = rep.rhs.mu_term;
  diag["nu_term"] = rep.rhs.nu_term;
  diag["converged"] = rep.limit.converged;
  diag["t"] = rep.ts;
  diag["quotients"] = rep.limit.quotients;
  out.push_back(record("main-theorem", rep.lhs, rep.rhs.total(), rep.relative_error, tol, diag));

  double noise = 1e-6;
  out.push_back(record("log-concavity", rep.limit.max_concavity_defect, 0,
                       std::max(rep.limit.max_concavity_defect, 0.0), noise));
  out.push_back(record("quotient-monotone", rep.limit.max_quotient_drop, 0,
                       std::max(rep.limit.max_quotient_drop, 0.0),
                       noise * (1 + std::abs(rep.limit.quotients.back()))));

  Schedule refined{s.schedule.depth + 4};
  VariationReport rep2 = main_theorem_report(s.f, *s.g, refined, s.quadrature.refined());
  out.push_back(record("main-theorem-refined", rep2.lhs, rep2.rhs.total(), rep2.relative_error,
                       tol * 0.1));

  if (auto it = s.expected.find("delta"); it != s.expected.end()) {
    double d = it->second;
    double res = std::max(rel(rep2.lhs, d), rel(rep2.rhs.total(), d));
    out.push_back(record("oracle-delta", rep2.rhs.total(), d, res, 1e-3));
  }
}

void run_levelset(const Scenario& s, std::vector<CheckRecord>& out) {
  require(s.g.has_value(), "levelset requires g");
  double tol = s.tolerances.at("levelset");
  double d3 = delta_via_levelsets(s.f, s.g->support());
  double rhs = delta_measure_formula(s.f, *s.g, s.quadrature).total();
  out.push_back(record("levelset", d3, rhs, rel(d3, rhs), tol));
}

void run_coarea(const Scenario& s, std::vector<CheckRecord>& out) {
  double tol = s.tolerances.at("coarea");
  Vec lo(s.dim), hi(s.dim);
  for (int i = 0; i < s.dim; ++i) {
    lo[i] = -s.grid_extent;
    hi[i] = s.grid_extent;
  }
  GridField field = sample_field(s.f, lo, hi, s.grid_nodes);
  for (const auto& name : s.coarea_bodies) {
    const ConvexBody& L = named_body(s, name);
    CoareaResult res = coarea_check(s.f, field, L);
    json diag;
    diag["tv"] = res.tv;
    diag["layered"] = res.layered;
    out.push_back(record("coarea/" + name, res.tv, res.layered, res.residual(), tol, diag));
    if (s.coarea_halving) {
      GridField fine = sample_field(s.f, lo, hi, s.grid_nodes * 2);
      CoareaResult res2 = coarea_check(s.f, fine, L);
      double ratio = res.residual() / std::max(res2.residual(), 1e-300);
      out.push_back(record("coarea-halving/" + name, ratio, 1.5, std::max(0.0, 1.5 - ratio), 0.0));
    }
  }
}

void run_quermass(const Scenario& s, std::vector<CheckRecord>& out) {
  double tol = s.tolerances.at("quermass");
  const ConvexBody& K = named_body(s, "K");
  const ConvexBody& L = named_body(s, "L");
  QuermassVector q = quermassintegrals(K, L);
  double res = std::max(q.fit_residual, q.heldout_residual);
  json diag;
  diag["W"] = q.w;
  for (size_t k = 0; k < q.w.size(); ++k) {
    auto it = s.expected.find("W" + std::to_string(k));
    if (it != s.expected.end()) res = std::max(res, rel(q.w[k], it->second));
  }
  out.push_back(record("quermass", q.heldout_residual, 0, res, tol, diag));
}

void run_centering(const Scenario& s, std::vector<CheckRecord>& out) {
  Vec defect = centering_defect(s.f, s.quadrature);
  DiscreteMeasure mu = moment_measure(s.f, s.quadrature);
  double tol = 1e-6 * (1 + measure_first_moment(mu));
  out.push_back(record("centering", defect.norm(), 0, defect.norm(), tol));
}

void run_scaling(const Scenario& s, std::vector<CheckRecord>& out) {
  require(s.g.has_value(), "scaling requires g");
  for (double c : s.scaling_constants) {
    auto [diff, expect] = scaling_shift_check(s.f, *s.g, c, s.schedule, s.quadrature);
    double tol = 1e-3 * (1 + std::abs(expect));
    std::ostringstream name;
    name << "scaling(c=" << c << ")";
    out.push_back(record(name.str(), diff, expect, std::abs(diff - expect), tol));
  }
}

void run_pointwise(const Scenario& s, std::vector<CheckRecord>& out) {
  require(s.g.has_value(), "pointwise requires g");
  // jittered interior sample of K_f
  auto [lo, hi] = bounding_box(s.f.support());
  Vec anchor = s.f.support().interior_point();
  for (int i = 0; i < s.dim; ++i) {
    if (!std::isfinite(lo[i])) lo[i] = anchor[i] - 3;
    if (!std::isfinite(hi[i])) hi[i] = anchor[i] + 3;
    double pad = 1e-3 * (hi[i] - lo[i]);
    lo[i] += pad;
    hi[i] -= pad;
  }
  double fmax = std::exp(-potential_min_value(s.f.potential()));
  double worst = 0;
  int found = 0, kinks = 0;
  json pts = json::array();
  for (int k = 0; found < s.pointwise_points && k < 20 * s.pointwise_points; ++k) {
    Vec x(s.dim);
    for (int i = 0; i < s.dim; ++i) {
      double u = std::fmod(0.5 + 0.6180339887498949 * (k + 1) * (i + 1), 1.0);
      u += 1e-6 * seeded_unit(s.quadrature.jitter_seed ^ 0xfeedULL, static_cast<uint64_t>(k * 3 + i));
      x[i] = lo[i] + (hi[i] - lo[i]) * std::clamp(u, 0.0, 1.0);
    }
    if (s.f(x) < 1e-8 * fmax) continue;
    PointwiseCheck pc = pointwise_derivative_check(s.f, *s.g, x, s.schedule);
    if (pc.kink) {
      ++kinks;
      continue;
    }
    ++found;
    double err = std::abs(pc.lhs - pc.rhs);
    double score = std::min(err / 1e-3, err / std::max(std::abs(pc.rhs), 1e-300) / 1e-2);
    worst = std::max(worst, score);
    pts.push_back({{"x", pc.x.c[0]}, {"lhs", pc.lhs}, {"rhs", pc.rhs}});
  }
  require(found >= s.pointwise_points, "pointwise: could not place enough interior points");
  json diag;
  diag["points"] = pts;
  diag["kinks_skipped"] = kinks;
  out.push_back(record("pointwise", worst, 0, worst, 1.0, diag));
}

void run_truncation(const Scenario& s, std::vector<CheckRecord>& out) {
  require(s.g.has_value(), "truncation requires g");
  auto seq = truncation_convergence(s.f, *s.g, s.truncation_radii, s.quadrature);
  double drop = 0;
  for (size_t i = 0; i + 1 < seq.size(); ++i) drop = std::max(drop, seq[i] - seq[i + 1]);
  out.push_back(record("truncation-monotone", drop, 0, std::max(drop, 0.0), 1e-8,
                       json{{"sequence", seq}}));
  double direct;
  if (auto it = s.expected.find("truncation_limit"); it != s.expected.end()) direct = it->second;
  else direct = delta_measure_formula(s.f, *s.g, s.quadrature).total();
  double tol = s.tolerances.at("truncation");
  out.push_back(record("truncation-limit", seq.back(), direct, rel(seq.back(), direct), tol));
}

void run_uniqueness(const Scenario& s, std::vector<CheckRecord>& out) {
  double tol = s.tolerances.at("uniqueness-sanity");
  LogConcaveFn g = translate_fn(s.f, s.uniqueness_shift);
  double dfg = delta_measure_formula(s.f, g, s.quadrature).total();
  double dgg = delta_measure_formula(g, g, s.quadrature).total();
  double dgf = delta_measure_formula(g, s.f, s.quadrature).total();
  double dff = delta_measure_formula(s.f, s.f, s.quadrature).total();
  out.push_back(record("uniqueness-fg", dfg, dgg, rel(dfg, dgg), tol));
  out.push_back(record("uniqueness-gf", dgf, dff, rel(dgf, dff), tol));
}

void run_divergence(const Scenario& s, std::vector<CheckRecord>& out) {
  double tol = s.tolerances.at("divergence-pairing");
  auto fields = test_field_catalog(s.dim);
  const ConvexBody* L = nullptr;
  if (auto it = s.bodies.find("L"); it != s.bodies.end()) L = &it->second;
  std::optional<double> tv;
  for (const auto& field : fields) {
    DivergencePairing p = divergence_pairing_check(s.f, field, s.quadrature);
    json diag{{"lhs", p.lhs}, {"gradient", p.gradient_term}, {"boundary", p.boundary_term}};
    out.push_back(record("divergence/" + field.name, p.lhs, p.gradient_term + p.boundary_term,
                         p.residual(), tol, diag));
    if (L) {
      if (!tv) tv = tv_representation(s.f, *L, s.quadrature).total();
      double gmax = field_max_gauge(field, *L);
      if (gmax > 0) {
        TestField unit = scale_field(field, 0.999 / gmax);
        DivergencePairing up = divergence_pairing_check(s.f, unit, s.quadrature);
        out.push_back(record("dual-feasibility/" + field.name, up.lhs, *tv,
                             std::max(0.0, up.lhs - *tv), tol));
      }
    }
  }
}

}  // namespace

bool Report::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

Report run_scenario(const Scenario& s) {
  Report rep;
  rep.scenario_id = s.id;
  rep.scenario_echo = s.echo;
  for (const auto& check : s.checks) {
    try {
      if (check == "main-theorem") run_main_theorem(s, rep.checks);
      else if (check == "levelset") run_levelset(s, rep.checks);
      else if (check == "coarea") run_coarea(s, rep.checks);
      else if (check == "quermass") run_quermass(s, rep.checks);
      else if (check == "centering") run_centering(s, rep.checks);
      else if (check == "scaling") run_scaling(s, rep.checks);
      else if (check == "pointwise") run_pointwise(s, rep.checks);
      else if (check == "truncation") run_truncation(s, rep.checks);
      else if (check == "uniqueness-sanity") run_uniqueness(s, rep.checks);
      else if (check == "divergence-pairing") run_divergence(s, rep.checks);
    } catch (const std::exception& e) {
      CheckRecord r;
      r.name = check;
      r.pass = false;
      r.residual = kInf;
      r.diagnostics = json{{"error", e.what()}};
      rep.checks.push_back(std::move(r));
    }
  }
  return rep;
}

std::vector<Report> run_suite(const std::vector<Scenario>& scenarios) {
  std::vector<Report> reports;
  for (const auto& s : scenarios) reports.push_back(run_scenario(s));
  std::sort(reports.begin(), reports.end(),
            [](const Report& a, const Report& b) { return a.scenario_id < b.scenario_id; });
  return reports;
}

namespace {

json sanitize(double v) {
  if (std::isnan(v)) return "nan";
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  return v;
}

}  // namespace

std::string report_json(const std::vector<Report>& reports, uint64_t seed) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["generator"] = "lcgeo";
  doc["seed"] = seed;
  json arr = json::array();
  for (const auto& rep : reports) {
    json r;
    r["scenario"] = rep.scenario_id;
    r["all_pass"] = rep.all_pass();
    r["scenario_echo"] = rep.scenario_echo;
    json checks = json::array();
    for (const auto& c : rep.checks) {
      json cj;
      cj["name"] = c.name;
      cj["lhs"] = sanitize(c.lhs);
      cj["rhs"] = sanitize(c.rhs);
      cj["residual"] = sanitize(c.residual);
      cj["tolerance"] = sanitize(c.tolerance);
      cj["pass"] = c.pass;
      cj["diagnostics"] = c.diagnostics;
      checks.push_back(cj);
    }
    r["checks"] = checks;
    arr.push_back(r);
  }
  doc["reports"] = arr;
  return doc.dump(2) + "\n";
}

std::string report_csv(const std::vector<Report>& reports) {
  std::ostringstream os;
  os << "scenario,check,lhs,rhs,residual,tolerance,pass\n";
  char buf[64];
  auto put = [&](double v) {
    snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
  };
  for (const auto& rep : reports)
    for (const auto& c : rep.checks) {
      os << rep.scenario_id << "," << c.name << ",";
      put(c.lhs);
      os << ",";
      put(c.rhs);
      os << ",";
      put(c.residual);
      os << ",";
      put(c.tolerance);
      os << "," << (c.pass ? "1" : "0") << "\n";
    }
  return os.str();
}

std::string report_plot_tables(const std::vector<Report>& reports) {
  std::ostringstream os;
  char buf[64];
  auto put = [&](double v) {
    snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
  };
  for (const auto& rep : reports)
    for (const auto& c : rep.checks) {
      if (c.name == "main-theorem" && c.diagnostics.contains("quotients")) {
        os << "# " << rep.scenario_id << " quotients\nt,q\n";
        auto ts = c.diagnostics.at("t");
        auto qs = c.diagnostics.at("quotients");
        for (size_t i = 0; i < ts.size(); ++i) {
          put(ts[i].get<double>());
          os << ",";
          put(qs[i].get<double>());
          os << "\n";
        }
      }
    }
  return os.str();
}

void check_report_version(const json& report_doc) {
  require(report_doc.contains("schema_version"), "report: missing schema_version");
  std::string v = report_doc.at("schema_version").get<std::string>();
  std::string want(kSchemaVersion);
  require(v.substr(0, v.find('.')) == want.substr(0, want.find('.')),
          "report: incompatible schema major version");
}

}  // namespace lcgeo

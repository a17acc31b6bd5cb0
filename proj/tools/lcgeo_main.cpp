#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "lcgeo/scenario.hpp"

using namespace lcgeo;

namespace {

struct GlobalOpts {
  uint64_t seed = 1;
  double tol = 0;        // 0 keeps per-check defaults
  int schedule_depth = 0;
  std::string out;
  std::string format = "json";
  int threads = 0;  // 0 = library default
  bool serial = false;
};

void apply_overrides(Scenario& s, const GlobalOpts& opt) {
  s.quadrature.jitter_seed = opt.seed;
  if (opt.schedule_depth > 0) s.schedule.depth = opt.schedule_depth;
  if (opt.tol > 0)
    for (auto& [name, t] : s.tolerances) t = opt.tol;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ("cannot write " + path).c_str());
  out << content;
}

int emit_reports(const std::vector<Report>& reports, const GlobalOpts& opt) {
  int failures = 0;
  for (const auto& rep : reports)
    for (const auto& c : rep.checks) {
      std::cout << (c.pass ? "PASS" : "FAIL") << "  " << rep.scenario_id << "/" << c.name
                << "  residual=" << c.residual << "  tol=" << c.tolerance << "\n";
      if (!c.pass) ++failures;
    }
  if (!opt.out.empty()) {
    std::filesystem::create_directories(opt.out);
    if (opt.format == "json" || opt.format == "all")
      write_file(opt.out + "/report.json", report_json(reports, opt.seed));
    if (opt.format == "csv" || opt.format == "all")
      write_file(opt.out + "/report.csv", report_csv(reports));
    if (opt.format == "plot" || opt.format == "all")
      write_file(opt.out + "/plot_tables.csv", report_plot_tables(reports));
  }
  std::cout << (failures == 0 ? "all checks passed" : "checks failed") << "\n";
  return failures == 0 ? 0 : 1;
}

Scenario load_one(const std::string& path, const GlobalOpts& opt) {
  Scenario s = load_scenario(path);
  apply_overrides(s, opt);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical first-variation toolkit for log-concave functions"};
  app.require_subcommand(1);

  GlobalOpts opt;
  app.add_option("--seed", opt.seed, "jitter seed for quadrature nodes");
  app.add_option("--tol", opt.tol, "override every check tolerance");
  app.add_option("--schedule-depth", opt.schedule_depth, "override the t-schedule depth");
  app.add_option("--out", opt.out, "output directory for reports");
  app.add_option("--format", opt.format, "report format: json|csv|plot|all");
  app.add_option("--threads", opt.threads, "thread count (0 = all)");
  app.add_flag("--serial", opt.serial, "run the serial reference kernels");

  std::string scenario_path, corpus_dir = "scenarios";

  auto* cmd_delta = app.add_subcommand("delta", "first variation: limit vs measure formula");
  cmd_delta->add_option("--scenario", scenario_path, "scenario file")->required();

  auto* cmd_tv = app.add_subcommand("tv", "anisotropic total variation of the scenario f");
  cmd_tv->add_option("--scenario", scenario_path, "scenario file")->required();

  auto* cmd_coarea = app.add_subcommand("coarea", "coarea identity on the scenario grid");
  cmd_coarea->add_option("--scenario", scenario_path, "scenario file")->required();

  auto* cmd_quer = app.add_subcommand("quermass", "relative quermassintegrals of K, L");
  cmd_quer->add_option("--scenario", scenario_path, "scenario file")->required();

  auto* cmd_meas = app.add_subcommand("measures", "export mu_f and nu_f as CSV");
  cmd_meas->add_option("--scenario", scenario_path, "scenario file")->required();

  auto* cmd_verify = app.add_subcommand("verify", "run every scenario check in a corpus");
  cmd_verify->add_option("--corpus", corpus_dir, "directory of scenario files");

  app.add_subcommand("catalog", "list available closed forms");

  CLI11_PARSE(app, argc, argv);

  if (opt.serial) kernels::set_default_exec(kernels::Exec::serial);
#ifdef _OPENMP
  if (opt.threads > 0) omp_set_num_threads(opt.threads);
#endif

  try {
    if (app.got_subcommand("catalog")) {
      std::cout << "potential forms:\n"
                << "  quadratic     phi = 1/2 x'Ax + b'x + c        (A PSD)\n"
                << "  power_norm    phi = a |x - m|^p + <t, x> + c  (p >= 1)\n"
                << "  linear        phi = <b, x> + c                (with a support body)\n"
                << "  barrier       phi = s/(1 - |x-m|/R) - s + c   (vanishes on the sphere)\n"
                << "  indicator     f = e^{log_height} on a body\n"
                << "modifiers: support (restrict), log_shift (scale by e^c), shift (translate)\n"
                << "bodies: interval, box (entries may be \"inf\"), ball, polytope, ellipsoid,\n"
                << "        point, all\n"
                << "checks: main-theorem, levelset, coarea, quermass, centering, scaling,\n"
                << "        pointwise, truncation, uniqueness-sanity, divergence-pairing\n";
      return 0;
    }
    if (app.got_subcommand("verify")) {
      auto scenarios = load_corpus(corpus_dir);
      for (auto& s : scenarios) apply_overrides(s, opt);
      auto reports = run_suite(scenarios);
      return emit_reports(reports, opt);
    }
    // single-scenario commands
    Scenario s = load_one(scenario_path, opt);
    if (app.got_subcommand("delta")) {
      require(s.g.has_value(), "delta: scenario has no g");
      VariationReport rep = main_theorem_report(s.f, *s.g, s.schedule, s.quadrature);
      std::cout << "limit      " << rep.lhs << (rep.lhs_infinite ? "  (divergence suspected)" : "")
                << "\n"
                << "formula    " << rep.rhs.total() << "  (mu " << rep.rhs.mu_term << " + nu "
                << rep.rhs.nu_term << ")\n"
                << "residual   " << rep.relative_error << "\n"
                << "t,quotient\n";
      for (size_t k = 0; k < rep.ts.size(); ++k)
        std::cout << rep.ts[k] << "," << rep.limit.quotients[k] << "\n";
      return 0;
    }
    if (app.got_subcommand("tv")) {
      const ConvexBody& L = s.bodies.count("L") ? s.bodies.at("L") : make_ball(Vec::zero(s.dim), 1);
      TVDecomposition d = tv_representation(s.f, L, s.quadrature);
      std::cout << "gradient part  " << d.gradient_part << "\n"
                << "boundary part  " << d.boundary_part << "\n"
                << "total          " << d.total() << "\n";
      if (s.dim <= 2) {
        Vec lo(s.dim), hi(s.dim);
        for (int i = 0; i < s.dim; ++i) lo[i] = -s.grid_extent, hi[i] = s.grid_extent;
        GridField field = sample_field(s.f, lo, hi, s.dim == 1 ? s.grid_nodes : 256);
        std::cout << "grid route     " << tv_grid(field, L) << "\n";
      }
      return 0;
    }
    if (app.got_subcommand("coarea")) {
      std::vector<CheckRecord> recs;
      Report rep;
      rep.scenario_id = s.id;
      Scenario sc = s;
      sc.checks = {"coarea"};
      rep = run_scenario(sc);
      return emit_reports({rep}, opt);
    }
    if (app.got_subcommand("quermass")) {
      QuermassVector q = quermassintegrals(s.bodies.at("K"), s.bodies.at("L"));
      std::cout << "W";
      for (double w : q.w) std::cout << " " << w;
      std::cout << "\nfit residual      " << q.fit_residual
                << "\nheld-out residual " << q.heldout_residual << "\n";
      return 0;
    }
    if (app.got_subcommand("measures")) {
      DiscreteMeasure mu = moment_measure(s.f, s.quadrature);
      DiscreteMeasure nu = boundary_measure(s.f, s.quadrature);
      std::string dir = opt.out.empty() ? "." : opt.out;
      std::filesystem::create_directories(dir);
      write_file(dir + "/mu.csv", measure_csv(mu));
      write_file(dir + "/nu.csv", measure_csv(nu));
      std::cout << "mu mass " << mu.total_mass() << " atoms " << mu.atoms.size() << "\n"
                << "nu mass " << nu.total_mass() << " atoms " << nu.atoms.size() << "\n"
                << "written to " << dir << "/mu.csv, " << dir << "/nu.csv\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

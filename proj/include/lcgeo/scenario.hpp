#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "lcgeo/variation.hpp"

namespace lcgeo {

inline constexpr const char* kSchemaVersion = "1.0";

struct Scenario {
  std::string id;
  int dim = 1;
  LogConcaveFn f;
  std::optional<LogConcaveFn> g;
  std::map<std::string, ConvexBody> bodies;
  std::vector<std::string> checks;
  std::map<std::string, double> tolerances;
  QuadratureSpec quadrature;
  Schedule schedule;

  // check parameters (defaults per the harness conventions)
  std::vector<double> scaling_constants{-2, 1};
  std::vector<double> truncation_radii{1, 2, 4, 8};
  Vec uniqueness_shift;
  int pointwise_points = 20;
  double grid_extent = 8;
  int grid_nodes = 4096;
  std::vector<std::string> coarea_bodies{"L"};
  bool coarea_halving = false;

  std::map<std::string, double> expected;  // optional oracle values
  nlohmann::json echo;
};

ConvexBody body_from_json(const nlohmann::json& j, const std::string& where);
LogConcaveFn fn_from_json(const nlohmann::json& j, int dim, const std::string& where);

Scenario scenario_from_json(const nlohmann::json& j);
Scenario load_scenario(const std::string& path);
std::vector<Scenario> load_corpus(const std::string& dir);

struct CheckRecord {
  std::string name;
  double lhs = 0;
  double rhs = 0;
  double residual = 0;
  double tolerance = 0;
  bool pass = false;
  nlohmann::json diagnostics;
};

struct Report {
  std::string scenario_id;
  std::vector<CheckRecord> checks;
  nlohmann::json scenario_echo;
  bool all_pass() const;
};

Report run_scenario(const Scenario& s);
std::vector<Report> run_suite(const std::vector<Scenario>& scenarios);

std::string report_json(const std::vector<Report>& reports, uint64_t seed);
std::string report_csv(const std::vector<Report>& reports);
std::string report_plot_tables(const std::vector<Report>& reports);

/// Loud failure when a persisted report has a different major schema version.
void check_report_version(const nlohmann::json& report_doc);

}  // namespace lcgeo

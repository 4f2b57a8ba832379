#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "jkoflow/driver.hpp"
#include "jkoflow/model.hpp"
#include "jkoflow/oracle.hpp"

namespace jkoflow {

struct InitialCondition {
  /// "barenblatt" | "bumps" | "plateau"
  std::string type = "barenblatt";
  // barenblatt
  double mass = 1.0;
  double t0 = 0.1;
  // bumps: sum of amplitude * cos^2(pi (x - c) / (2 w)) on |x - c| < w
  std::vector<double> centers = {-1.0, 1.0};
  double half_width = 0.8;
  double amplitude = 1.0;
  // plateau: height on [left, right]
  double left = -1.0;
  double right = 1.0;
  double height = 0.5;
};

struct RunConfig {
  ModelSpec model;
  /// theta_supp = theta_supp_rel * max rho0 unless set explicitly.
  double theta_supp_rel = 1e-10;
  bool theta_supp_explicit = false;

  double half_width = 10.0;
  int cells = 1024;

  SchemeMode mode = SchemeMode::kSplitting;
  double tau = 1e-3;
  double horizon = 0.5;
  DriverConfig driver;

  /// FV oracle step and stepping policy (fv-oracle mode).
  double fv_dt = 1e-4;
  bool fv_adaptive = true;

  InitialCondition initial;

  // fault injection
  bool beta_zero = false;
  double kernel_scale = 1.0;

  std::string output_dir = "out";
  unsigned seed = 0;
};

/// Keys accepted at the top level and inside "initial".
const std::vector<std::string>& config_keys();
const std::vector<std::string>& initial_keys();

/// Parse and validate; throws ConfigError naming the key and the rule.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config_file(const std::filesystem::path& path);

/// Full echo with every default written out.
nlohmann::json to_json(const RunConfig& cfg);

/// Re-run every module precondition; throws ConfigError.
void validate_config(const RunConfig& cfg);

GridPtr config_grid(const RunConfig& cfg);
GridDensity initial_density(const RunConfig& cfg, GridPtr grid);
/// Model with the support threshold resolved against rho0.
ModelSpec resolved_model(const RunConfig& cfg, const GridDensity& rho0);

SchemeMode parse_mode(const std::string& s);

/// Levenshtein distance, used for key suggestions.
std::size_t edit_distance(const std::string& a, const std::string& b);

}  // namespace jkoflow

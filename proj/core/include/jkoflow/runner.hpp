#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "jkoflow/config.hpp"
#include "jkoflow/driver.hpp"

namespace jkoflow {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidConfig = 1;
inline constexpr int kExitStall = 2;
inline constexpr int kExitCheckFailed = 3;

inline constexpr int kSummarySchemaVersion = 1;

/// Environment variable that overrides output_dir.
inline constexpr const char* kOutputDirEnv = "JKOFLOW_OUTPUT_DIR";

std::string library_version();

struct Simulation {
  GridPtr grid;
  ModelSpec spec;
  GridDensity rho0;
  TrajectoryRecord record;
};

/// Build rho0 and run the configured scheme. Throws on solver failures other than stalls.
Simulation simulate(const RunConfig& cfg);

struct CheckVerdict {
  std::string name;
  bool passed = true;
  /// Non-gating checks are recorded without affecting the exit status.
  bool gating = true;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

/// Checks enabled for this configuration, evaluated on a finished simulation.
std::vector<CheckVerdict> run_checks(const RunConfig& cfg, const Simulation& sim);

struct RunOutcome {
  int exit_code = kExitOk;
  std::filesystem::path output_dir;
  nlohmann::json summary;
};

/// Run, write diagnostics.csv, snapshots/step_<n>.csv and summary.json.
RunOutcome run(const RunConfig& cfg);

/// output_dir, or the environment override.
std::filesystem::path resolve_output_dir(const RunConfig& cfg);

/// Compare two configurations at their common step times; writes compare.json and compare.csv
/// under out_dir. Exit 3 when the relative L1 distance exceeds budget_rel.
RunOutcome compare(const RunConfig& a, const RunConfig& b, const std::filesystem::path& out_dir,
                   double budget_rel = 0.05);

/// Override `key` with each value (JSON literals, else strings) and run the variants
/// concurrently, each under out_dir/<key>=<value>. Writes out_dir/sweep.csv.
RunOutcome sweep(const nlohmann::json& base, const std::string& key,
                 const std::vector<std::string>& values, const std::filesystem::path& out_dir);

}  // namespace jkoflow

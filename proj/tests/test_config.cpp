#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "jkoflow/config.hpp"
#include "jkoflow/errors.hpp"
#include "jkoflow/presets.hpp"
#include "jkoflow/runner.hpp"

using namespace jkoflow;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string error_of(const json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("jkoflow_test_" + name + "_" + std::to_string(std::random_device{}()));
  fs::remove_all(p);
  return p;
}

json tiny_run(const fs::path& dir) {
  return {{"mode", "jko-only"}, {"chi", 0.0}, {"n", 128}, {"particles", 100}, {"tau", 0.01}, {"T", 0.03},
          {"output_dir", dir.string()}};
}

}  // namespace

TEST(Config, DefaultsFromEmptyObject) {
  const RunConfig cfg = parse_config(json::object());
  EXPECT_EQ(cfg.model.gamma, 2.0);
  EXPECT_EQ(cfg.mode, SchemeMode::kSplitting);
  EXPECT_FALSE(cfg.theta_supp_explicit);
  EXPECT_EQ(cfg.initial.type, "barenblatt");
}

TEST(Config, RuleViolationsNameTheKey) {
  EXPECT_EQ(error_of({{"gamma", 0.5}}), "gamma must be > 1 (got 0.5)");
  EXPECT_EQ(error_of({{"chi", -1}}), "chi must be >= 0 (got -1)");
  EXPECT_EQ(error_of({{"tau", 0.3}, {"T", 1.0}}), "tau must divide T (tau = 0.3, T = 1)");
  EXPECT_NE(error_of({{"gamma", "two"}}).find("gamma must be a number"), std::string::npos);
  EXPECT_NE(error_of({{"mode", "euler"}}).find("mode must be one of"), std::string::npos);
  EXPECT_NE(error_of({{"L", 0.5}}).find("initial support"), std::string::npos);
  EXPECT_NE(error_of({{"initial", {{"type", "plateau"}, {"left", 1}, {"right", 0}}}}).find("initial.left"),
            std::string::npos);
}

TEST(Config, UnknownKeySuggestsNearest) {
  EXPECT_EQ(error_of({{"gamma_", 2.0}}), "unknown key \"gamma_\"; did you mean \"gamma\"?");
  EXPECT_EQ(error_of({{"initial", {{"mas", 1.0}}}}),
            "unknown key \"initial.mas\"; did you mean \"initial.mass\"?");
  EXPECT_EQ(error_of({{"zzzzzzzzzz", 1}}), "unknown key \"zzzzzzzzzz\"");
}

TEST(Config, EditDistance) {
  EXPECT_EQ(edit_distance("kitten", "sitting"), 3u);
  EXPECT_EQ(edit_distance("", "abc"), 3u);
  EXPECT_EQ(edit_distance("tau", "tau"), 0u);
}

TEST(Config, EchoRoundTrips) {
  for (const auto& name : preset_names()) {
    const RunConfig cfg = parse_config(preset(name));
    EXPECT_EQ(to_json(parse_config(to_json(cfg))), to_json(cfg)) << name;
  }
  json doc = {{"theta_supp", 1e-6}};
  EXPECT_EQ(to_json(parse_config(doc)).at("theta_supp"), 1e-6);
}

TEST(Config, ThresholdResolution) {
  const RunConfig cfg = parse_config({{"theta_supp_rel", 1e-3}});
  const GridDensity rho0 = initial_density(cfg, config_grid(cfg));
  EXPECT_DOUBLE_EQ(resolved_model(cfg, rho0).theta_supp, 1e-3 * max_value(rho0));
  const RunConfig fixed = parse_config({{"theta_supp", 0.25}});
  EXPECT_DOUBLE_EQ(resolved_model(fixed, rho0).theta_supp, 0.25);
}

TEST(Config, PlateauUsesExactOverlap) {
  const RunConfig cfg = parse_config(
      {{"L", 1.0}, {"n", 4}, {"initial", {{"type", "plateau"}, {"left", -0.3}, {"right", 0.45}, {"height", 2.0}}}});
  const GridDensity rho = initial_density(cfg, config_grid(cfg));
  EXPECT_NEAR(mass(rho), 1.5, 1e-14);
  EXPECT_NEAR(rho[1], 1.2, 1e-14);
}

TEST(Presets, ShippedFilesMatchBuiltIns) {
  for (const auto& name : preset_names()) {
    std::ifstream in(fs::path(JKOFLOW_PRESET_DIR) / (name + ".json"));
    ASSERT_TRUE(in) << name;
    EXPECT_EQ(json::parse(in), preset(name)) << name;
    EXPECT_NO_THROW(parse_config(preset(name))) << name;
  }
  EXPECT_THROW(preset("nope"), InvalidArgument);
}

TEST(Runner, WritesArtifacts) {
  const fs::path dir = scratch_dir("artifacts");
  const RunOutcome out = run(parse_config(tiny_run(dir)));
  EXPECT_EQ(out.exit_code, kExitOk);
  EXPECT_TRUE(fs::exists(dir / "diagnostics.csv"));
  for (int k = 0; k <= 3; ++k) EXPECT_TRUE(fs::exists(dir / "snapshots" / ("step_" + std::to_string(k) + ".csv")));
  std::ifstream in(dir / "summary.json");
  const json s = json::parse(in);
  EXPECT_EQ(s.at("schema_version"), kSummarySchemaVersion);
  EXPECT_EQ(s.at("status"), "ok");
  EXPECT_EQ(s.at("config").at("n"), 128);
  std::ifstream csv(dir / "diagnostics.csv");
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header.rfind("step,time,mass,m2,entropy,A,K,S,w2_step", 0), 0u);
  int rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  EXPECT_EQ(rows, 4);
  fs::remove_all(dir);
}

TEST(Runner, EnvironmentOverridesOutputDir) {
  const fs::path dir = scratch_dir("env");
  RunConfig cfg = parse_config(tiny_run("ignored"));
  ::setenv(kOutputDirEnv, dir.string().c_str(), 1);
  EXPECT_EQ(resolve_output_dir(cfg), dir);
  ::unsetenv(kOutputDirEnv);
  EXPECT_EQ(resolve_output_dir(cfg), fs::path("ignored"));
}

TEST(Runner, StallExitsWithTwo) {
  const fs::path dir = scratch_dir("stall");
  json doc = tiny_run(dir);
  doc["max_iterations"] = 1;
  doc["grad_tol_rel"] = 1e-14;
  const RunOutcome out = run(parse_config(doc));
  EXPECT_EQ(out.exit_code, kExitStall);
  EXPECT_EQ(out.summary.at("status"), "stalled");
  fs::remove_all(dir);
}

TEST(Runner, FaultIsRecordedButNotGating) {
  json doc = preset("fault-beta-zero");
  doc["T"] = 0.01;
  doc["n"] = 256;
  const RunConfig cfg = parse_config(doc);
  const Simulation sim = simulate(cfg);
  bool seen = false;
  for (const auto& c : run_checks(cfg, sim)) {
    if (c.name != "constraint") continue;
    seen = true;
    EXPECT_FALSE(c.passed);
    EXPECT_FALSE(c.gating);
  }
  EXPECT_TRUE(seen);
}

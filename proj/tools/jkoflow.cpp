#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "jkoflow/config.hpp"
#include "jkoflow/errors.hpp"
#include "jkoflow/presets.hpp"
#include "jkoflow/runner.hpp"
#include "jkoflow/validation.hpp"

namespace fs = std::filesystem;
using namespace jkoflow;

namespace {

nlohmann::json read_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("malformed config " + path + ": " + e.what());
  }
}

void print_checks(const nlohmann::json& summary) {
  if (!summary.contains("checks")) return;
  for (const auto& c : summary.at("checks")) {
    std::printf("  %-15s %s%s  value %.3e\n", c.at("name").get<std::string>().c_str(),
                c.at("verdict").get<std::string>().c_str(),
                c.at("gating").get<bool>() ? "" : " (not gating)", c.at("value").get<double>());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained aggregation-diffusion-reaction solver (JKO splitting scheme)"};
  app.require_subcommand(1);
  app.set_version_flag("--version", library_version());

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "Run one configuration and write its artifacts");
  run_cmd->add_option("config", config_path, "JSON config file")->required();

  std::vector<std::string> only;
  double kernel_scale = 1.0;
  std::string validate_out;
  auto* validate_cmd = app.add_subcommand("validate", "Run the acceptance battery");
  validate_cmd->add_option("--only", only, "Run only these checks")
      ->check(CLI::IsMember(criterion_names()));
  validate_cmd->add_option("--kernel-scale", kernel_scale, "Fault injection: scale K by this factor");
  validate_cmd->add_option("--json", validate_out, "Write the verdict list to this file");

  std::string config_b, compare_out = "out/compare";
  double budget = 0.05;
  auto* compare_cmd = app.add_subcommand("compare", "Run two configurations and compare them");
  compare_cmd->add_option("configA", config_path, "First JSON config")->required();
  compare_cmd->add_option("configB", config_b, "Second JSON config")->required();
  compare_cmd->add_option("--out", compare_out, "Output directory");
  compare_cmd->add_option("--budget", budget, "Relative L1 budget");

  std::string param, sweep_out;
  std::vector<std::string> values;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a configuration over a list of values");
  sweep_cmd->add_option("config", config_path, "JSON config file")->required();
  sweep_cmd->add_option("--param", param, "Top-level key to vary")->required();
  sweep_cmd->add_option("--values", values, "Comma-separated values")->required()->delimiter(',');
  sweep_cmd->add_option("--out", sweep_out, "Output directory (default: <output_dir>/sweep)");

  std::string preset_name, preset_dir;
  auto* preset_cmd = app.add_subcommand("preset", "Print or write the shipped presets");
  preset_cmd->add_option("name", preset_name, "Preset to print")
      ->check(CLI::IsMember(preset_names()));
  preset_cmd->add_option("--write", preset_dir, "Write every preset as <name>.json into this directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      const RunConfig cfg = parse_config_file(config_path);
      const RunOutcome res = run(cfg);
      std::printf("%s: %s (exit %d)\n", res.output_dir.string().c_str(),
                  res.summary.value("status", "").c_str(), res.exit_code);
      if (res.summary.contains("error")) {
        std::fprintf(stderr, "%s\n", res.summary.at("error").get<std::string>().c_str());
      }
      print_checks(res.summary);
      return res.exit_code;
    }
    if (*validate_cmd) {
      ValidationOptions opts;
      opts.only = only;
      opts.kernel_scale = kernel_scale;
      opts.on_result = [](const CriterionResult& r) {
        std::printf("%s\n", format_result(r).c_str());
        std::fflush(stdout);
      };
      const auto results = run_validation(opts);
      if (!validate_out.empty()) std::ofstream(validate_out) << to_json(results).dump(2) << '\n';
      std::vector<std::string> failed;
      for (const auto& r : results) {
        if (!r.passed) failed.push_back(r.name);
      }
      if (failed.empty()) {
        std::printf("all %zu checks passed\n", results.size());
        return kExitOk;
      }
      std::printf("failed:");
      for (const auto& f : failed) std::printf(" %s", f.c_str());
      std::printf("\n");
      return kExitCheckFailed;
    }
    if (*compare_cmd) {
      const RunConfig a = parse_config_file(config_path);
      const RunConfig b = parse_config_file(config_b);
      const RunOutcome res = compare(a, b, compare_out, budget);
      std::printf("%s: max relative L1 %.4e, budget %.3g (exit %d)\n", res.output_dir.string().c_str(),
                  res.summary.value("max_l1_rel", 0.0), budget, res.exit_code);
      return res.exit_code;
    }
    if (*sweep_cmd) {
      const nlohmann::json doc = read_document(config_path);
      const RunConfig base = parse_config(doc);
      const fs::path out = sweep_out.empty() ? resolve_output_dir(base) / "sweep" : fs::path(sweep_out);
      const RunOutcome res = sweep(doc, param, values, out);
      std::printf("%s: %zu runs (exit %d)\n", out.string().c_str(), values.size(), res.exit_code);
      return res.exit_code;
    }
    if (*preset_cmd) {
      if (!preset_dir.empty()) {
        fs::create_directories(preset_dir);
        for (const auto& n : preset_names()) {
          std::ofstream(fs::path(preset_dir) / (n + ".json")) << preset(n).dump(2) << '\n';
        }
        return kExitOk;
      }
      if (preset_name.empty()) {
        for (const auto& n : preset_names()) std::printf("%s\n", n.c_str());
        return kExitOk;
      }
      std::printf("%s\n", preset(preset_name).dump(2).c_str());
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "invalid config: %s\n", e.what());
    return kExitInvalidConfig;
  } catch (const InvalidArgument& e) {
    std::fprintf(stderr, "invalid argument: %s\n", e.what());
    return kExitInvalidConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitStall;
  }
  return kExitOk;
}

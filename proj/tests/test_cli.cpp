#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

int cli(const std::string& args) {
  const std::string cmd = std::string(JKOFLOW_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("jkoflow_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const nlohmann::json& doc) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << doc.dump();
    return p.string();
  }

  nlohmann::json tiny() const {
    return {{"mode", "jko-only"}, {"chi", 0.0}, {"n", 128}, {"particles", 100},
            {"tau", 0.01},        {"T", 0.02},  {"output_dir", (dir_ / "run").string()}};
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, RunSucceeds) {
  EXPECT_EQ(cli("run " + write("ok.json", tiny())), 0);
  EXPECT_TRUE(fs::exists(dir_ / "run" / "summary.json"));
}

TEST_F(Cli, InvalidConfigExitsOne) {
  auto doc = tiny();
  doc["gamma_"] = 2.0;
  EXPECT_EQ(cli("run " + write("typo.json", doc)), 1);
  doc = tiny();
  doc["gamma"] = 0.5;
  EXPECT_EQ(cli("run " + write("gamma.json", doc)), 1);
  EXPECT_EQ(cli("run " + (dir_ / "missing.json").string()), 1);
  std::ofstream(dir_ / "broken.json") << "{";
  EXPECT_EQ(cli("run " + (dir_ / "broken.json").string()), 1);
}

TEST_F(Cli, StallExitsTwo) {
  auto doc = tiny();
  doc["max_iterations"] = 1;
  doc["grad_tol_rel"] = 1e-14;
  EXPECT_EQ(cli("run " + write("stall.json", doc)), 2);
}

TEST_F(Cli, KernelCheckAndFault) {
  EXPECT_EQ(cli("validate --only kernel"), 0);
  EXPECT_EQ(cli("validate --only kernel --kernel-scale 1.01"), 3);
  EXPECT_NE(cli("validate --only nonsense"), 0);
}

TEST_F(Cli, CompareAndSweep) {
  const std::string a = write("a.json", tiny());
  auto other = tiny();
  other["particles"] = 120;
  const std::string b = write("b.json", other);
  EXPECT_EQ(cli("compare " + a + " " + b + " --out " + (dir_ / "cmp").string()), 0);
  EXPECT_TRUE(fs::exists(dir_ / "cmp" / "compare.json"));
  EXPECT_EQ(cli("sweep " + a + " --param particles --values 80,100 --out " + (dir_ / "sw").string()), 0);
  EXPECT_TRUE(fs::exists(dir_ / "sw" / "sweep.csv"));
}

TEST_F(Cli, PresetWrite) {
  EXPECT_EQ(cli("preset --write " + (dir_ / "p").string()), 0);
  EXPECT_TRUE(fs::exists(dir_ / "p" / "barenblatt.json"));
  EXPECT_EQ(cli("preset splitting"), 0);
}

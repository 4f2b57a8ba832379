#include <cmath>

#include <gtest/gtest.h>

#include "jkoflow/diagnostics.hpp"
#include "jkoflow/driver.hpp"
#include "jkoflow/errors.hpp"

using namespace jkoflow;

namespace {

struct Fixture {
  GridPtr grid = make_grid(4.0, 256);
  KernelTable tab{grid};
  GridDensity rho0 = GridDensity::cell_average(grid, [](double x) { return std::max(0.0, 0.5 * (1.0 - x * x)); });
  ModelSpec spec;
  DriverConfig cfg;
  Fixture() {
    spec.chi = 1.0;
    spec.k_m = 1.0;
    cfg.jko.particles = 200;
  }
};

}  // namespace

TEST(Driver, StepCount) {
  EXPECT_EQ(step_count(1e-3, 0.5), 500);
  EXPECT_EQ(step_count(0.1, 0.0), 0);
  EXPECT_THROW(step_count(0.3, 1.0), InvalidArgument);
  EXPECT_THROW(step_count(0.0, 1.0), InvalidArgument);
}

TEST(Driver, ZeroHorizonKeepsInitialState) {
  Fixture f;
  f.cfg.carry_particles = false;
  const auto rec = run_splitting(f.rho0, f.spec, 0.1, 0.0, f.cfg, f.tab);
  ASSERT_EQ(rec.snapshots.size(), 1u);
  EXPECT_TRUE(rec.log.empty());
  EXPECT_EQ(l1_distance(rec.snapshots[0].rho, f.rho0), 0.0);
  // with a carried ladder step 0 is the ladder's reconstruction
  f.cfg.carry_particles = true;
  const auto carried = run_splitting(f.rho0, f.spec, 0.1, 0.0, f.cfg, f.tab);
  EXPECT_NEAR(mass(carried.snapshots[0].rho), mass(f.rho0), 1e-12);
  EXPECT_LT(l1_distance(carried.snapshots[0].rho, f.rho0), 2e-2);
}

TEST(Driver, InterpolantConvention) {
  Fixture f;
  const auto rec = run_splitting(f.rho0, f.spec, 0.01, 0.03, f.cfg, f.tab);
  ASSERT_EQ(rec.steps, 3);
  ASSERT_EQ(rec.snapshots.size(), 4u);
  EXPECT_EQ(&interpolant(rec, 0.0).first, &rec.at_step(0).rho);
  EXPECT_EQ(&interpolant(rec, 0.001).first, &rec.at_step(1).rho);
  EXPECT_EQ(&interpolant(rec, 0.01).first, &rec.at_step(1).rho);
  EXPECT_EQ(&interpolant(rec, 0.0100001).first, &rec.at_step(2).rho);
  EXPECT_EQ(&interpolant(rec, 0.03).first, &rec.at_step(3).rho);
  EXPECT_THROW(interpolant(rec, 0.031), InvalidArgument);
  EXPECT_THROW(interpolant(rec, -0.001), InvalidArgument);
}

TEST(Driver, SupportFollowsDensity) {
  Fixture f;
  const auto rec = run_splitting(f.rho0, f.spec, 0.01, 0.03, f.cfg, f.tab);
  for (const auto& s : rec.snapshots) {
    const auto expect = support_set(s.rho, f.spec.theta_supp);
    EXPECT_EQ(s.beta.cells, expect.cells) << s.step;
  }
}

TEST(Driver, NoReactionMatchesJkoOnly) {
  Fixture f;
  f.spec.k_m = 0.0;
  const auto a = run_splitting(f.rho0, f.spec, 0.01, 0.05, f.cfg, f.tab);
  const auto b = run_jko_only(f.rho0, f.spec, 0.01, 0.05, f.cfg, f.tab);
  ASSERT_EQ(a.snapshots.size(), b.snapshots.size());
  for (std::size_t k = 0; k < a.snapshots.size(); ++k) {
    EXPECT_LE(l1_distance(a.snapshots[k].rho, b.snapshots[k].rho), 1e-14);
  }
}

TEST(Driver, ReactionGrowsMassTransportConserves) {
  Fixture f;
  const auto rec = run_splitting(f.rho0, f.spec, 0.01, 0.05, f.cfg, f.tab);
  for (const auto& log : rec.log) {
    EXPECT_NEAR(log.mass_after_transport, log.mass_before, 1e-12 * log.mass_before);
    EXPECT_TRUE(log.has_reaction);
    EXPECT_GT(log.mass_after_reaction, log.mass_after_transport);
    EXPECT_TRUE(log.gronwall.passed());
  }
  for (std::size_t k = 1; k < rec.snapshots.size(); ++k) ASSERT_TRUE(rec.snapshots[k].rho_half.has_value());
}

TEST(Driver, SnapshotStrideKeepsFinal) {
  Fixture f;
  f.cfg.snapshot_stride = 2;
  const auto rec = run_jko_only(f.rho0, f.spec, 0.01, 0.05, f.cfg, f.tab);
  EXPECT_TRUE(rec.has_step(0));
  EXPECT_FALSE(rec.has_step(1));
  EXPECT_TRUE(rec.has_step(4));
  EXPECT_TRUE(rec.has_step(5));
  EXPECT_THROW(rec.at_step(3), InvalidArgument);
  EXPECT_EQ(rec.log.size(), 5u);
}

TEST(Driver, FrozenSupportFault) {
  Fixture f;
  f.cfg.freeze_beta_zero = true;
  const auto rec = run_splitting(f.rho0, f.spec, 0.01, 0.02, f.cfg, f.tab);
  for (const auto& s : rec.snapshots) EXPECT_EQ(s.beta.count(), 0);
}

TEST(Driver, StallIsReported) {
  Fixture f;
  f.cfg.jko.max_iterations = 1;
  f.cfg.jko.grad_tol_rel = 1e-14;
  const auto stopped = run_jko_only(f.rho0, f.spec, 0.01, 0.02, f.cfg, f.tab);
  EXPECT_TRUE(stopped.aborted);
  EXPECT_EQ(stopped.stall_step, 1);
  EXPECT_EQ(stopped.last_step(), 1);
  EXPECT_FALSE(stopped.abort_reason.empty());
  f.cfg.continue_on_stall = true;
  const auto rec = run_jko_only(f.rho0, f.spec, 0.01, 0.02, f.cfg, f.tab);
  EXPECT_FALSE(rec.aborted);
  EXPECT_EQ(rec.stall_step, 1);
  EXPECT_EQ(rec.last_step(), 2);
}

TEST(Driver, RecordPassesEnergyChecks) {
  Fixture f;
  f.spec.k_m = 0.0;
  const auto rec = run_jko_only(f.rho0, f.spec, 0.01, 0.1, f.cfg, f.tab);
  EXPECT_TRUE(dissipation_check(rec).passed);
  const auto w = w2_sum_check(rec);
  EXPECT_TRUE(w.passed);
  EXPECT_EQ(w.rows.size(), 10u);
}

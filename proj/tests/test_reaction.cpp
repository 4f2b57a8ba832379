#include <cmath>

#include <gtest/gtest.h>

#include "jkoflow/reaction.hpp"

using namespace jkoflow;

namespace {

ModelSpec logistic(double k) {
  ModelSpec m;
  m.k_m = k;
  return m;
}

double exact_logistic(double s0, double t, double k) {
  return s0 * std::exp(k * t) / (1.0 - s0 + s0 * std::exp(k * t));
}

}  // namespace

TEST(Reaction, LogisticClosedForm) {
  EXPECT_NEAR(reaction_flow(0.5, std::log(3.0), logistic(1.0)), 0.75, 1e-8);
  for (double s0 : {0.01, 0.3, 1.7, 4.0}) {
    for (double t : {1e-3, 0.2, 1.0}) {
      EXPECT_NEAR(reaction_flow(s0, t, logistic(2.0)), exact_logistic(s0, t, 2.0), 1e-8) << s0 << " " << t;
    }
  }
}

TEST(Reaction, FixedPoints) {
  EXPECT_EQ(reaction_flow(0.0, 1.0, logistic(1.0)), 0.0);
  EXPECT_NEAR(reaction_flow(1.0, 1.0, logistic(1.0)), 1.0, 1e-15);
  EXPECT_EQ(reaction_flow(0.7, 1.0, logistic(0.0)), 0.7);
}

TEST(Reaction, FourthOrderRate) {
  // a single RK4 substep at both sizes; local error is fifth order
  const ModelSpec m = logistic(1.0);
  const double e1 = std::abs(reaction_flow(0.2, 0.02, m) - exact_logistic(0.2, 0.02, 1.0));
  const double e2 = std::abs(reaction_flow(0.2, 0.01, m) - exact_logistic(0.2, 0.01, 1.0));
  EXPECT_GT(e1 / e2, 16.0);
}

TEST(Reaction, GridStepIsCellwise) {
  const GridPtr g = make_grid(1.0, 4);
  const GridDensity rho(g, {0.0, 0.5, 1.0, 2.0});
  double clamped = -1.0;
  const auto out = reaction_step(rho, std::log(3.0), logistic(1.0), &clamped);
  EXPECT_EQ(out[0], 0.0);
  EXPECT_NEAR(out[1], 0.75, 1e-8);
  EXPECT_NEAR(out[2], 1.0, 1e-14);
  EXPECT_NEAR(out[3], exact_logistic(2.0, std::log(3.0), 1.0), 1e-8);
  EXPECT_GE(clamped, 0.0);
  EXPECT_LE(clamped, 1e-13 * 2.0);
}

TEST(Reaction, MassGrowthBounded) {
  const GridPtr g = make_grid(2.0, 100);
  const auto rho = GridDensity::sample(g, [](double x) { return std::max(0.0, 1.0 - x * x); });
  const double tau = 0.05;
  const auto out = reaction_step(rho, tau, logistic(1.5));
  EXPECT_GT(mass(out), mass(rho));
  EXPECT_LE(mass(out), std::exp(1.5 * tau) * mass(rho));
}

TEST(Reaction, PartitionStep) {
  const Partition p{{0.0, 1.0, 2.0}, {0.5, 0.0}};
  const Partition q = reaction_step(p, std::log(3.0), logistic(1.0));
  EXPECT_EQ(q.edges, p.edges);
  EXPECT_NEAR(q.density[0], 0.75, 1e-8);
  EXPECT_EQ(q.density[1], 0.0);
}

TEST(Reaction, GronwallZeroAndFixedPoint) {
  const GridPtr g = make_grid(1.0, 20);
  const ModelSpec m = logistic(1.0);
  const auto zero = GridDensity::zero(g);
  const GronwallReport z = gronwall_check(zero, reaction_step(zero, 0.1, m), 0.1, 2.0, m);
  EXPECT_TRUE(z.passed());
  const auto one = GridDensity::sample(g, [](double) { return 1.0; });
  const GronwallReport f = gronwall_check(one, reaction_step(one, 0.1, m), 0.1, 2.0, m);
  EXPECT_TRUE(f.passed());
  EXPECT_NEAR(f.ratio_lgamma, 1.0, 1e-12);
  EXPECT_NEAR(f.bound, std::exp(2.0 * 0.1) * (1.0 + 10.0 * g->dx()), 1e-12);
}

TEST(Reaction, GronwallOnSmallProfile) {
  const GridPtr g = make_grid(2.0, 200);
  ModelSpec m = logistic(2.0);
  m.gamma = 2.5;
  const auto rho = GridDensity::cell_average(g, [](double x) { return 0.3 * std::max(0.0, 1.0 - x * x); });
  const GronwallReport r = gronwall_check(rho, reaction_step(rho, 0.05, m), 0.05, m.gamma, m);
  EXPECT_TRUE(r.passed());
  EXPECT_GT(r.ratio_lgamma, 1.0);
  EXPECT_LE(r.ratio_lgamma, r.bound);
}

TEST(Reaction, InvariantRegion) {
  const GridPtr g = make_grid(1.0, 50);
  const auto rho = GridDensity::sample(g, [](double x) { return 1.5 * (x + 1.0); });
  const auto out = reaction_step(rho, 0.7, logistic(3.0));
  for (int i = 0; i < g->size(); ++i) {
    EXPECT_GE(out[i], 0.0);
    EXPECT_LE(out[i], std::max(1.0, max_value(rho)));
  }
}

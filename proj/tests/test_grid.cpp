#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "jkoflow/errors.hpp"
#include "jkoflow/grid.hpp"

using namespace jkoflow;

TEST(Grid, CentersAndSpacing) {
  const GridPtr g = make_grid(1.0, 4);
  EXPECT_DOUBLE_EQ(g->dx(), 0.5);
  const double expect[] = {-0.75, -0.25, 0.25, 0.75};
  for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(g->center(i), expect[i]);
  EXPECT_DOUBLE_EQ(make_grid(10.0, 1024)->dx(), 0.01953125);
}

TEST(Grid, RejectsBadShape) {
  EXPECT_THROW(make_grid(0.0, 4), InvalidArgument);
  EXPECT_THROW(make_grid(1.0, 0), InvalidArgument);
  EXPECT_THROW(GridDensity(make_grid(1.0, 4), {1.0, 1.0}), InvalidArgument);
}

TEST(Grid, NegativeValuesRejected) {
  EXPECT_THROW(GridDensity(make_grid(1.0, 2), {1.0, -0.5}), InvalidArgument);
}

TEST(GridDensity, UniformMoments) {
  // rho = 1 on [0, 1]
  const GridPtr g = make_grid(1.0, 400);
  const auto rho = GridDensity::cell_average(g, [](double x) { return x >= 0.0 ? 1.0 : 0.0; });
  EXPECT_NEAR(mass(rho), 1.0, 1e-12);
  EXPECT_NEAR(first_moment(rho), 0.5, 1e-12);
  // midpoint rule on x^2 loses dx^2/12 per unit mass
  EXPECT_NEAR(second_moment(rho), 1.0 / 3.0, g->dx() * g->dx());
  EXPECT_NEAR(entropy(rho), -1.0, 1e-12);
  EXPECT_EQ(entropy(GridDensity::zero(g)), 0.0);
}

TEST(GridDensity, EntropyOfScaledUniform) {
  // rho = 2 on [0, 1/2]: (2 log 2 - 2) / 2 = log 2 - 1
  const GridPtr g = make_grid(1.0, 400);
  const auto rho = GridDensity::cell_average(g, [](double x) { return x >= 0.0 && x < 0.5 ? 2.0 : 0.0; });
  EXPECT_NEAR(entropy(rho), std::log(2.0) - 1.0, 1e-12);
  EXPECT_NEAR(lp_norm_pow(rho, 2.0), 2.0, 1e-12);
}

TEST(GridDensity, H1OfLinearProfile) {
  // rho = x on [0, 1], gamma = 2: |d/dx rho|^2 integrates to 1 inside, plus wall jumps
  const GridPtr g = make_grid(0.5, 2000);
  const auto rho = GridDensity::sample(g, [](double x) { return x + 0.5; });
  EXPECT_NEAR(h1_seminorm_pow(rho, 2.0), 1.0, 1e-9);
}

TEST(GridDensity, L1DistanceAcrossGrids) {
  // same piecewise-constant function on nested grids, then a mass-1 plateau vs zero
  const GridDensity a(make_grid(1.0, 2), {1.0, 3.0});
  const GridDensity b(make_grid(1.0, 4), {1.0, 1.0, 3.0, 3.0});
  EXPECT_NEAR(l1_distance(a, b), 0.0, 1e-15);
  const GridDensity c(make_grid(1.0, 4), {0.0, 2.0, 0.0, 0.0});
  EXPECT_NEAR(l1_distance(GridDensity::zero(make_grid(1.0, 8)), c), 1.0, 1e-15);
}

TEST(Particles, QuantileLadderOfUniform) {
  const GridPtr g = make_grid(1.0, 400);
  const auto rho = GridDensity::cell_average(g, [](double x) { return x >= 0.0 ? 1.0 : 0.0; });
  const ParticleDensity p = to_particles(rho, 4);
  ASSERT_EQ(p.size(), 4);
  const double expect[] = {0.125, 0.375, 0.625, 0.875};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(p.positions()[k], expect[k], 1e-12);
  EXPECT_NEAR(p.particle_mass(), 0.25, 1e-14);
}

TEST(Particles, RoundTripConservesMass) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const GridPtr g = make_grid(3.0, 300);
  for (int trial = 0; trial < 20; ++trial) {
    const double c = -1.0 + 2.0 * u(rng), w = 0.3 + u(rng), a = 0.1 + 2.0 * u(rng);
    const auto rho = GridDensity::cell_average(g, [=](double x) {
      const double r = (x - c) / w;
      return std::abs(r) < 1.0 ? a * std::pow(std::cos(0.5 * std::numbers::pi * r), 2) : 0.0;
    });
    const auto back = to_grid(to_particles(rho, 50 + trial * 17), g);
    EXPECT_NEAR(mass(back), mass(rho), 1e-10 * mass(rho));
  }
}

TEST(Particles, FineLadderReproducesDensity) {
  const GridPtr g = make_grid(2.0, 200);
  const auto rho = GridDensity::cell_average(g, [](double x) { return std::max(0.0, 1.0 - x * x); });
  const auto back = to_grid(to_particles(rho, 4000), g);
  EXPECT_LT(l1_distance(back, rho), 2e-3);
}

TEST(Particles, WallOverflowThrows) {
  EXPECT_THROW(to_grid(ParticleDensity({-0.5, 1.0}, 0.5), make_grid(1.0, 10)), DomainOverflowError);
  EXPECT_THROW(to_grid(ParticleDensity({-1.5, 0.0}, 0.5), make_grid(1.0, 10)), DomainOverflowError);
}

TEST(Particles, CapsSqueezedAgainstWall) {
  const auto rho = to_grid(ParticleDensity({-0.5, 0.95}, 0.5), make_grid(1.0, 10));
  EXPECT_NEAR(mass(rho), 1.0, 1e-14);
}

TEST(Particles, NonIncreasingRejected) {
  EXPECT_THROW(ParticleDensity({0.2, 0.1}, 1.0), InvalidArgument);
}

TEST(Particles, EmptyDensityThrows) {
  EXPECT_THROW(to_particles(GridDensity::zero(make_grid(1.0, 8)), 4), EmptyDensityError);
}

TEST(Partition, QuantileIsInverseCdf) {
  Partition p{{0.0, 1.0, 3.0}, {1.0, 0.5}};
  EXPECT_DOUBLE_EQ(p.mass(), 2.0);
  EXPECT_NEAR(quantile(p, 0.5), 0.5, 1e-14);
  EXPECT_NEAR(quantile(p, 1.5), 2.0, 1e-14);
  const double levels[] = {0.25, 1.0, 1.75};
  const auto q = quantile_sweep(p, levels);
  EXPECT_NEAR(q[0], 0.25, 1e-14);
  EXPECT_NEAR(q[1], 1.0, 1e-14);
  EXPECT_NEAR(q[2], 2.5, 1e-14);
}

TEST(Partition, DepositIsExact) {
  Partition p{{-0.3, 0.45}, {2.0}};
  const auto rho = deposit(p, make_grid(1.0, 4));
  EXPECT_NEAR(rho[1], 2.0 * 0.3 / 0.5, 1e-14);
  EXPECT_NEAR(rho[2], 2.0 * 0.45 / 0.5, 1e-14);
  EXPECT_NEAR(mass(rho), 1.5, 1e-14);
}

TEST(Partition, ReconstructHasCapsAndGaps) {
  const ParticleDensity p({0.0, 1.0, 3.0}, 1.0);
  const Partition part = reconstruct(p, 10.0);
  EXPECT_NEAR(part.mass(), 3.0, 1e-14);
  EXPECT_DOUBLE_EQ(part.edges.front(), -0.5);
  EXPECT_DOUBLE_EQ(part.edges.back(), 4.0);
}

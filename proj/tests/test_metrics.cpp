#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "jkoflow/errors.hpp"
#include "jkoflow/metrics.hpp"

using namespace jkoflow;

namespace {

GridDensity plateau(const GridPtr& g, double a, double b, double h) {
  std::vector<double> v(g->size(), 0.0);
  for (int i = 0; i < g->size(); ++i) {
    const double lo = std::max(g->edge(i), a), hi = std::min(g->edge(i + 1), b);
    if (hi > lo) v[i] = h * (hi - lo) / g->dx();
  }
  return GridDensity(g, v);
}

GridDensity random_density(const GridPtr& g, std::mt19937& rng, double total) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(g->size(), 0.0);
  const int a = static_cast<int>(u(rng) * g->size() / 2), b = a + 5 + static_cast<int>(u(rng) * g->size() / 3);
  for (int i = a; i < b && i < g->size(); ++i) v[i] = u(rng);
  GridDensity r(g, v);
  return r.scaled(total / mass(r));
}

}  // namespace

TEST(Metrics, W2BetweenUniformIntervals) {
  // F^{-1}(s) = s vs 2s on [0, 1]: W2^2 = int s^2 = 1/3
  const GridPtr g = make_grid(3.0, 600);
  const auto a = plateau(g, 0.0, 1.0, 1.0), b = plateau(g, 0.0, 2.0, 0.5);
  EXPECT_NEAR(w2_1d(a, b), 1.0 / std::sqrt(3.0), 1e-6);
  EXPECT_NEAR(w1_1d(a, b), 0.5, 1e-12);
}

TEST(Metrics, TranslationDistance) {
  const GridPtr g = make_grid(3.0, 600);
  const auto a = plateau(g, -1.0, 0.0, 1.0), b = plateau(g, 0.5, 1.5, 1.0);
  EXPECT_NEAR(w2_1d(a, b), 1.5, 1e-9);
  EXPECT_NEAR(w1_1d(a, b), 1.5, 1e-12);
  EXPECT_NEAR(w2_1d(a, a), 0.0, 1e-12);
}

TEST(Metrics, UnequalMassThrows) {
  const GridPtr g = make_grid(3.0, 60);
  EXPECT_THROW(w2_1d(plateau(g, 0, 1, 1), plateau(g, 0, 1, 1.1)), UnequalMassError);
}

TEST(Metrics, ParticleW2) {
  const ParticleDensity a({0.0, 1.0}, 0.5), b({0.5, 2.0}, 0.5);
  EXPECT_NEAR(w2_particles(a, b), std::sqrt(0.5 * 0.25 + 0.5 * 1.0), 1e-15);
}

TEST(Metrics, OrderingAndTriangle) {
  std::mt19937 rng(5);
  const GridPtr g = make_grid(4.0, 200);
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = random_density(g, rng, 1.0), b = random_density(g, rng, 1.0),
               c = random_density(g, rng, 1.0);
    const double ab = w2_1d(a, b), bc = w2_1d(b, c), ac = w2_1d(a, c);
    EXPECT_LE(w1_1d(a, b), ab + 1e-9);
    EXPECT_LE(ac, ab + bc + 1e-9);
    EXPECT_NEAR(ab, w2_1d(b, a), 1e-12);
    const DblBounds d = dbl_bounds(a, b);
    EXPECT_LE(d.lower, d.upper + 1e-12);
    EXPECT_LE(d.upper, w1_1d(a, b) + 1e-12);
  }
}

TEST(Metrics, BoundedLipschitzOfSeparatedBumps) {
  const GridPtr g = make_grid(6.0, 1200);
  const auto a = plateau(g, -0.05, 0.05, 10.0);
  for (double shift : {0.25, 1.0, 2.0, 4.0}) {
    const auto b = plateau(g, shift - 0.05, shift + 0.05, 10.0);
    const DblBounds d = dbl_bounds(a, b);
    EXPECT_GE(d.lower, 0.9 * std::min(shift, 2.0)) << shift;
    EXPECT_LE(d.lower, d.upper + 1e-12);
    EXPECT_LE(d.upper, std::min(shift, 2.0) + 1e-9);
  }
}

TEST(Metrics, BoundedLipschitzMassDefect) {
  const GridPtr g = make_grid(2.0, 100);
  const auto a = plateau(g, 0, 1, 1.0), b = plateau(g, 0, 1, 0.5);
  const DblBounds d = dbl_bounds(a, b);
  EXPECT_NEAR(d.lower, 0.5, 1e-12);
  EXPECT_NEAR(d.upper, 0.5, 1e-12);
}

TEST(Metrics, ProbesAreBoundedLipschitz) {
  for (const auto& f : dbl_dictionary(-2.0, 3.0)) {
    for (double t = -6.0; t < 6.0; t += 0.01) {
      EXPECT_LE(std::abs(f(t)), 1.0 + 1e-12);
      EXPECT_LE(std::abs(f(t + 0.01) - f(t)), 0.01 + 1e-12);
    }
  }
}

TEST(Metrics, QuantileVectors) {
  const GridPtr g = make_grid(1.0, 100);
  const auto q = quantiles(plateau(g, 0, 1, 1.0), 4);
  ASSERT_EQ(q.positions.size(), 4u);
  EXPECT_NEAR(q.positions[0], 0.125, 1e-12);
  EXPECT_NEAR(q.positions[3], 0.875, 1e-12);
}

#pragma once

#include <vector>

#include "jkoflow/grid.hpp"

namespace jkoflow {

/// Quantile function sampled at midpoint mass levels.
struct QuantileVector {
  std::vector<double> levels;
  std::vector<double> positions;
  double mass = 0.0;
};

/// Midpoint levels (j + 1/2) m / count of a piecewise-constant density.
QuantileVector quantiles(const Partition& part, int count);
QuantileVector quantiles(const GridDensity& rho, int count);

/// W2 from two quantile vectors sharing the same level set.
double w2_from_quantiles(const QuantileVector& a, const QuantileVector& b);

/// Exact 1D W2 through quantile quadrature at 4 max(n) levels.
/// Throws UnequalMassError when masses differ by more than 1e-9 relative.
double w2_1d(const GridDensity& rho, const GridDensity& mu);
/// W2 between two particle ladders under identity matching.
double w2_particles(const ParticleDensity& a, const ParticleDensity& b);

/// W1 = int |F_rho - F_mu| dx, exact for piecewise-constant densities.
double w1_1d(const GridDensity& rho, const GridDensity& mu);
double w1_partitions(const Partition& a, const Partition& b);

struct DblBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Certified interval for the bounded-Lipschitz distance.
DblBounds dbl_bounds(const GridDensity& rho, const GridDensity& mu);

/// One member of the bounded 1-Lipschitz dictionary, piecewise linear
/// through its knots and constant outside them.
struct LipschitzProbe {
  std::vector<double> x;
  std::vector<double> y;

  double operator()(double t) const;
  /// Exact integral over [a, b].
  double integral(double a, double b) const;
};

/// The 64 probes laid out over [lo, hi].
std::vector<LipschitzProbe> dbl_dictionary(double lo, double hi);

}  // namespace jkoflow

#pragma once

#include <vector>

#include "jkoflow/driver.hpp"
#include "jkoflow/kernel.hpp"
#include "jkoflow/test_functions.hpp"

namespace jkoflow {

struct DissipationRow {
  int step = 0;
  /// W2^2 / (2 tau) between consecutive ladders.
  double lhs = 0.0;
  /// F[prev | prev] - F[new | prev].
  double rhs = 0.0;
  double slack = 0.0;
  bool passed = true;
  /// rhs + slack - lhs; negative on violation.
  double margin() const { return rhs + slack - lhs; }
};

struct DissipationReport {
  std::vector<DissipationRow> rows;
  bool passed = true;
  double worst_margin = 0.0;
};

/// Minimizer inequality at every transport step of a record.
DissipationReport dissipation_check(const TrajectoryRecord& rec);

struct W2SumRow {
  int step = 0;
  double cumulative = 0.0;
  double bound = 0.0;
  bool passed = true;
};

struct W2SumReport {
  /// Lower-bound constant chi m^2 for -(A + K).
  double c = 0.0;
  double a0 = 0.0;
  double k0 = 0.0;
  std::vector<W2SumRow> rows;
  bool passed = true;
};

/// sum_{k<=n} W2^2 <= 4 tau (A0 + K0) + C tau + 4 n chi^2 m tau^2 for every n.
W2SumReport w2_sum_check(const TrajectoryRecord& rec);

struct RegularityReport {
  double tau = 0.0;
  /// tau sum_n (|rho^{gamma/2}|_{L2}^2 + |d_x rho^{gamma/2}|_{L2}^2).
  double h1_integral = 0.0;
  std::vector<double> times;
  std::vector<double> entropy;
};

RegularityReport regularity_check(const TrajectoryRecord& rec, double gamma);

struct RegularityComparison {
  std::vector<double> h1_integrals;
  double max_ratio = 1.0;
  bool uniform = true;
  /// Slope of the entropy bound, fit on the coarsest level (factor 2) and reused.
  double c_ent = 0.0;
  bool entropy_bounded = true;
  bool passed() const { return uniform && entropy_bounded; }
};

/// Levels ordered coarse to fine. Uniform when max/min of the integrals <= max_ratio_allowed.
RegularityComparison compare_regularity(const std::vector<RegularityReport>& levels,
                                        double max_ratio_allowed = 1.5);

/// max over psi of |tau sum_n sum_i h(rho_i^n) (1 - beta_i^n) psi(t_n, x_i) dx|.
double constraint_residual(const TrajectoryRecord& rec,
                           const std::vector<SpaceTimeProbe>& battery = psi_battery());

/// Battery max of the weak-form defect between aligned times t < s, with
/// left-endpoint (piecewise-constant) time integration.
double weak_form_residual(const TrajectoryRecord& rec, const std::vector<BumpFunction>& battery,
                          double t, double s, BesselKernel1D kernel = {});

/// W2 when masses agree to 1e-9, otherwise the d_BL upper bound.
double record_distance(const GridDensity& a, const GridDensity& b);

struct SelfConvergenceReport {
  /// sup over the coarse step times of the distance between successive levels.
  std::vector<double> distances;
  /// log2(d_k / d_{k+1}); empty with fewer than three levels.
  std::vector<double> rates;
  bool monotone = true;
};

/// Records at tau, tau/2, tau/4, ... sharing rho0, spec and T.
SelfConvergenceReport self_convergence(const std::vector<const TrajectoryRecord*>& levels);

struct HolderFit {
  /// max over sampled pairs of d(rho(t), rho(s)) / sqrt(t - s).
  double constant = 0.0;
  int pairs = 0;
};

/// Pairs (s, s + 2^j dt) with s on the dt lattice; dt must be a multiple of rec.tau.
HolderFit holder_constant(const TrajectoryRecord& rec, double dt);

}  // namespace jkoflow

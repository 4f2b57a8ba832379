#pragma once

#include <vector>

#include "jkoflow/driver.hpp"
#include "jkoflow/grid.hpp"
#include "jkoflow/kernel.hpp"
#include "jkoflow/model.hpp"

namespace jkoflow {

struct FvConfig {
  /// Nominal time step; an upper bound when adaptive.
  double dt = 1e-4;
  double horizon = 0.0;
  /// Spacing of stored snapshots; must divide the horizon.
  double record_interval = 1e-3;
  /// Shrink steps to the admissible value instead of failing.
  bool adaptive = false;
};

/// Largest step allowed by the explicit diffusion and advection limits at rho.
double fv_admissible_dt(const GridDensity& rho, const ModelSpec& spec, const KernelTable& tab);

/// Upwind / explicit finite-volume solution with zero-flux walls.
/// Throws CflViolation (carrying the admissible step) when not adaptive.
TrajectoryRecord fv_run(const GridDensity& rho0, const ModelSpec& spec, const FvConfig& cfg,
                        const KernelTable& tab);

/// Self-similar solution of d_t rho = d_xx rho^2:
///   rho(t, x) = t^{-1/3} (C_m - x^2 / (12 t^{2/3}))_+.
class Barenblatt {
 public:
  explicit Barenblatt(double mass = 1.0);

  double mass() const { return mass_; }
  double c_m() const { return c_m_; }
  double value(double t, double x) const;
  double support_radius(double t) const;
  /// Exact cell averages at time t.
  GridDensity density(GridPtr grid, double t) const;

 private:
  double mass_;
  double c_m_;
};

double barenblatt(double t, double x, double mass);

struct OracleRow {
  double time = 0.0;
  double l1 = 0.0;
  /// Negative when the masses differ.
  double w2 = -1.0;
  double dbl_upper = 0.0;
  bool within_budget = true;
};

struct OracleReport {
  std::vector<OracleRow> rows;
  double max_l1 = 0.0;
  bool within_budget = true;
};

/// Distances between two records at the requested times. Grids may differ.
OracleReport compare_to_oracle(const TrajectoryRecord& a, const TrajectoryRecord& b,
                               const std::vector<double>& times, double l1_budget);

}  // namespace jkoflow

#pragma once

#include "jkoflow/grid.hpp"
#include "jkoflow/model.hpp"

namespace jkoflow {

/// Value of the cell ODE s' = M(s) after time tau: classical RK4 with
/// substeps no longer than min(tau, 0.02 / (k_M max(1, |1 - 2 s|))).
double reaction_flow(double s, double tau, const ModelSpec& spec);

/// Cellwise reaction half-step. Negative rounding is clamped to 0 and its
/// largest magnitude reported through `clamped`.
GridDensity reaction_step(const GridDensity& rho, double tau, const ModelSpec& spec,
                          double* clamped = nullptr);
/// Same ODE applied to every piece of a partition.
Partition reaction_step(const Partition& part, double tau, const ModelSpec& spec);

struct GronwallReport {
  double ratio_lgamma = 1.0;
  double ratio_m2 = 1.0;
  double ratio_h1 = 1.0;
  /// e^{C tau} (1 + 10 dx) with C = gamma k_M.
  double bound = 1.0;
  bool pass_lgamma = true;
  bool pass_m2 = true;
  bool pass_h1 = true;

  bool passed() const { return pass_lgamma && pass_m2 && pass_h1; }
};

GronwallReport gronwall_check(const GridDensity& before, const GridDensity& after, double tau,
                              double gamma, const ModelSpec& spec);

}  // namespace jkoflow

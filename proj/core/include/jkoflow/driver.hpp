#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jkoflow/grid.hpp"
#include "jkoflow/kernel.hpp"
#include "jkoflow/model.hpp"
#include "jkoflow/reaction.hpp"
#include "jkoflow/transport.hpp"

namespace jkoflow {

enum class SchemeMode { kSplitting, kJkoOnly, kFiniteVolume };

struct DriverConfig {
  JkoConfig jko;
  /// Keep the particle ladder between steps instead of re-sampling it from the
  /// grid every step. The grid is then only an output.
  bool carry_particles = true;
  bool continue_on_stall = false;
  /// Store every k-th snapshot (the final one is always stored).
  int snapshot_stride = 1;
  /// Fault injection: hold beta at 0 for the whole run.
  bool freeze_beta_zero = false;
};

struct Snapshot {
  int step = 0;
  double time = 0.0;
  GridDensity rho;
  /// Post-transport, pre-reaction density that produced this step.
  std::optional<GridDensity> rho_half;
  SupportIndicator beta;
};

struct StepLog {
  int step = 0;
  double time = 0.0;
  bool has_transport = true;
  JkoReport jko;
  double mass_before = 0.0;
  double mass_after_transport = 0.0;
  double mass_after_reaction = 0.0;
  bool has_reaction = false;
  GronwallReport gronwall;
  double clamped = 0.0;
};

struct TrajectoryRecord {
  SchemeMode mode = SchemeMode::kSplitting;
  double tau = 0.0;
  double horizon = 0.0;
  int steps = 0;
  int snapshot_stride = 1;
  ModelSpec spec;
  std::vector<Snapshot> snapshots;
  std::vector<StepLog> log;
  bool aborted = false;
  int stall_step = -1;
  std::string abort_reason;

  /// Snapshot stored for step n; throws if thinned out or not reached.
  const Snapshot& at_step(int n) const;
  bool has_step(int n) const;
  /// Last step actually reached.
  int last_step() const { return snapshots.empty() ? -1 : snapshots.back().step; }
};

/// N with N tau = T; throws unless tau divides T to 1e-12.
int step_count(double tau, double horizon);

TrajectoryRecord run_splitting(const GridDensity& rho0, const ModelSpec& spec, double tau,
                               double horizon, const DriverConfig& cfg, const KernelTable& tab);
/// Same scheme with the reaction half-step skipped.
TrajectoryRecord run_jko_only(const GridDensity& rho0, const ModelSpec& spec, double tau,
                              double horizon, const DriverConfig& cfg, const KernelTable& tab);

/// (rho_tau^k, beta_tau^k) for t in ((k-1) tau, k tau]; the initial pair at t = 0.
std::pair<const GridDensity&, const SupportIndicator&> interpolant(const TrajectoryRecord& rec,
                                                                   double t);

std::string to_string(SchemeMode m);

}  // namespace jkoflow

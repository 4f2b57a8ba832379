#include "jkoflow/driver.hpp"

#include <algorithm>
#include <cmath>

#include "jkoflow/errors.hpp"

namespace jkoflow {

const Snapshot& TrajectoryRecord::at_step(int n) const {
  auto it = std::lower_bound(snapshots.begin(), snapshots.end(), n,
                             [](const Snapshot& s, int k) { return s.step < k; });
  if (it == snapshots.end() || it->step != n) {
    throw InvalidArgument("record has no snapshot for step " + std::to_string(n));
  }
  return *it;
}

bool TrajectoryRecord::has_step(int n) const {
  auto it = std::lower_bound(snapshots.begin(), snapshots.end(), n,
                             [](const Snapshot& s, int k) { return s.step < k; });
  return it != snapshots.end() && it->step == n;
}

int step_count(double tau, double horizon) {
  if (!(tau > 0.0)) throw InvalidArgument("tau must be > 0");
  if (!(horizon >= 0.0)) throw InvalidArgument("horizon must be >= 0");
  const double q = horizon / tau;
  const long n = std::lround(q);
  if (std::abs(n * tau - horizon) > 1e-12 * std::max(1.0, horizon)) {
    throw InvalidArgument("tau must divide the horizon");
  }
  return static_cast<int>(n);
}

namespace {

TrajectoryRecord run_scheme(const GridDensity& rho0, const ModelSpec& spec, double tau,
                            double horizon, const DriverConfig& cfg, const KernelTable& tab,
                            bool with_reaction) {
  validate_model(spec);
  validate_jko_config(cfg.jko);
  require_same_grid(rho0.grid(), tab.grid(), "driver");
  if (cfg.snapshot_stride < 1) throw InvalidArgument("snapshot stride must be >= 1");
  if (!(mass(rho0) > 0.0)) throw EmptyDensityError("driver: initial mass must be positive");

  const GridPtr grid = rho0.grid_ptr();
  const double L = grid->half_width();
  const double min_gap = cfg.jko.min_gap_rel * L;
  const int n_p = cfg.jko.particles;

  TrajectoryRecord rec;
  rec.mode = with_reaction ? SchemeMode::kSplitting : SchemeMode::kJkoOnly;
  rec.tau = tau;
  rec.horizon = horizon;
  rec.steps = step_count(tau, horizon);
  rec.snapshot_stride = cfg.snapshot_stride;
  rec.spec = spec;

  auto support_of = [&](const GridDensity& rho) {
    return cfg.freeze_beta_zero ? empty_support(grid) : support_set(rho, spec.theta_supp);
  };

  ParticleDensity particles = quantile_particles(partition_of(rho0), n_p, min_gap);
  GridDensity rho = cfg.carry_particles ? to_grid(particles, grid) : rho0;
  SupportIndicator beta = support_of(rho);
  rec.snapshots.push_back({0, 0.0, rho, std::nullopt, beta});

  const bool react = with_reaction && spec.k_m > 0.0;
  for (int n = 0; n < rec.steps; ++n) {
    StepLog log;
    log.step = n + 1;
    log.time = (n + 1) * tau;
    log.mass_before = mass(rho);

    if (!cfg.carry_particles) particles = quantile_particles(partition_of(rho), n_p, min_gap);
    ParticleStep step = jko_step_particles(particles, beta, tau, spec, cfg.jko, tab);
    log.jko = step.report;

    const Partition half_part = reconstruct(step.next, L);
    GridDensity rho_half = deposit(half_part, grid);
    log.mass_after_transport = mass(rho_half);
    SupportIndicator beta_next = support_of(rho_half);

    GridDensity rho_next = rho_half;
    if (react) {
      if (cfg.carry_particles) {
        const Partition reacted = reaction_step(half_part, tau, spec);
        rho_next = deposit(reacted, grid);
        particles = quantile_particles(reacted, n_p, min_gap);
      } else {
        rho_next = reaction_step(rho_half, tau, spec, &log.clamped);
      }
      log.has_reaction = true;
      log.gronwall = gronwall_check(rho_half, rho_next, tau, spec.gamma, spec);
    } else {
      particles = std::move(step.next);
    }
    log.mass_after_reaction = mass(rho_next);
    rec.log.push_back(log);

    const bool stalled = !log.jko.converged;
    const bool last = n + 1 == rec.steps || (stalled && !cfg.continue_on_stall);
    if ((n + 1) % cfg.snapshot_stride == 0 || last) {
      rec.snapshots.push_back({n + 1, log.time, rho_next, rho_half, beta_next});
    }
    rho = std::move(rho_next);
    beta = std::move(beta_next);

    if (stalled && rec.stall_step < 0) rec.stall_step = n + 1;
    if (stalled && !cfg.continue_on_stall) {
      rec.aborted = true;
      rec.abort_reason = "transport step " + std::to_string(n + 1) + " did not converge after " +
                         std::to_string(log.jko.iterations) + " iterations (|grad| = " +
                         std::to_string(log.jko.grad_norm_final) + ", tolerance " +
                         std::to_string(log.jko.tolerance) + ")";
      break;
    }
  }
  return rec;
}

}  // namespace

TrajectoryRecord run_splitting(const GridDensity& rho0, const ModelSpec& spec, double tau,
                               double horizon, const DriverConfig& cfg, const KernelTable& tab) {
  return run_scheme(rho0, spec, tau, horizon, cfg, tab, true);
}

TrajectoryRecord run_jko_only(const GridDensity& rho0, const ModelSpec& spec, double tau,
                              double horizon, const DriverConfig& cfg, const KernelTable& tab) {
  return run_scheme(rho0, spec, tau, horizon, cfg, tab, false);
}

std::pair<const GridDensity&, const SupportIndicator&> interpolant(const TrajectoryRecord& rec,
                                                                   double t) {
  if (!(t >= 0.0) || t > rec.horizon * (1.0 + 1e-12) + 1e-15) {
    throw InvalidArgument("interpolant: time outside [0, T]");
  }
  int k = 0;
  if (t > 0.0) {
    const double q = t / rec.tau;
    const double r = std::round(q);
    k = std::abs(q - r) <= 1e-9 * std::max(1.0, q) ? static_cast<int>(r)
                                                     : static_cast<int>(std::ceil(q));
  }
  const Snapshot& s = rec.at_step(k);
  return {s.rho, s.beta};
}

std::string to_string(SchemeMode m) {
  switch (m) {
    case SchemeMode::kSplitting:
      return "splitting";
    case SchemeMode::kJkoOnly:
      return "jko-only";
    case SchemeMode::kFiniteVolume:
      return "fv-oracle";
  }
  return "unknown";
}

}  // namespace jkoflow

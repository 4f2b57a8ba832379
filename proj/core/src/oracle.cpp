#include "jkoflow/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "jkoflow/errors.hpp"
#include "jkoflow/metrics.hpp"
#include "jkoflow/reaction.hpp"

namespace jkoflow {

namespace {

std::vector<double> potential_for(const GridDensity& rho, const ModelSpec& spec,
                                  const KernelTable& tab) {
  const int n = rho.size();
  if (spec.chi == 0.0) return std::vector<double>(n, 0.0);
  const SupportIndicator beta = support_set(rho, spec.theta_supp);
  std::vector<double> src(n);
  for (int i = 0; i < n; ++i) src[i] = rho[i] + beta.cells[i];
  return convolve(src, tab).values;
}

double admissible_dt(const GridDensity& rho, const std::vector<double>& c, const ModelSpec& spec) {
  const double h = rho.grid().dx();
  double diff = 0.0;
  for (double v : rho.values()) diff = std::max(diff, 2.0 * pressure_prime(v, spec));
  double vmax = 0.0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    vmax = std::max(vmax, spec.chi * std::abs(c[i + 1] - c[i]) / h);
  }
  double dt = std::numeric_limits<double>::infinity();
  if (diff > 0.0) dt = std::min(dt, 0.45 * h * h / diff);
  if (vmax > 0.0) dt = std::min(dt, 0.45 * h / vmax);
  return dt;
}

// One explicit transport update followed by the cell reaction.
void fv_update(std::vector<double>& rho, const std::vector<double>& c, double dt, double h,
               const ModelSpec& spec) {
  const int n = static_cast<int>(rho.size());
  std::vector<double> flux(n + 1, 0.0);
  for (int i = 0; i + 1 < n; ++i) {
    const double v = spec.chi * (c[i + 1] - c[i]) / h;
    const double up = v > 0.0 ? rho[i] : rho[i + 1];
    flux[i + 1] = up * v - (pressure(rho[i + 1], spec) - pressure(rho[i], spec)) / h;
  }
  for (int i = 0; i < n; ++i) {
    rho[i] -= dt / h * (flux[i + 1] - flux[i]);
    if (rho[i] < 0.0) rho[i] = 0.0;
  }
  if (spec.k_m > 0.0) {
    for (double& s : rho) s = std::max(reaction_flow(s, dt, spec), 0.0);
  }
}

}  // namespace

double fv_admissible_dt(const GridDensity& rho, const ModelSpec& spec, const KernelTable& tab) {
  require_same_grid(rho.grid(), tab.grid(), "fv_admissible_dt");
  return admissible_dt(rho, potential_for(rho, spec, tab), spec);
}

TrajectoryRecord fv_run(const GridDensity& rho0, const ModelSpec& spec, const FvConfig& cfg,
                        const KernelTable& tab) {
  validate_model(spec);
  require_same_grid(rho0.grid(), tab.grid(), "fv_run");
  if (!(cfg.dt > 0.0)) throw InvalidArgument("fv: dt must be > 0");

  const GridPtr grid = rho0.grid_ptr();
  const double h = grid->dx();
  TrajectoryRecord rec;
  rec.mode = SchemeMode::kFiniteVolume;
  rec.tau = cfg.record_interval;
  rec.horizon = cfg.horizon;
  rec.steps = step_count(cfg.record_interval, cfg.horizon);
  rec.spec = spec;
  rec.snapshots.push_back({0, 0.0, rho0, std::nullopt, support_set(rho0, spec.theta_supp)});

  std::vector<double> rho(rho0.values().begin(), rho0.values().end());
  for (int n = 0; n < rec.steps; ++n) {
    StepLog log;
    log.step = n + 1;
    log.time = (n + 1) * cfg.record_interval;
    log.has_transport = false;
    log.has_reaction = spec.k_m > 0.0;
    {
      double m = 0.0;
      for (double v : rho) m += v;
      log.mass_before = m * h;
    }

    double remaining = cfg.record_interval;
    if (!cfg.adaptive) {
      const int sub = static_cast<int>(std::ceil(remaining / cfg.dt - 1e-9));
      const double dt = remaining / sub;
      for (int k = 0; k < sub; ++k) {
        const GridDensity cur(grid, rho);
        const auto c = potential_for(cur, spec, tab);
        const double adm = admissible_dt(cur, c, spec);
        if (dt > adm) {
          throw CflViolation("fv: step " + std::to_string(dt) + " exceeds the admissible " +
                                 std::to_string(adm),
                             adm);
        }
        fv_update(rho, c, dt, h, spec);
      }
    } else {
      while (remaining > 0.0) {
        const GridDensity cur(grid, rho);
        const auto c = potential_for(cur, spec, tab);
        double dt = std::min(cfg.dt, admissible_dt(cur, c, spec));
        if (remaining - dt <= 1e-12 * cfg.record_interval) dt = remaining;
        fv_update(rho, c, dt, h, spec);
        remaining -= dt;
      }
    }

    GridDensity snap(grid, rho);
    log.mass_after_transport = log.mass_after_reaction = mass(snap);
    rec.log.push_back(log);
    SupportIndicator beta = support_set(snap, spec.theta_supp);
    rec.snapshots.push_back({n + 1, log.time, std::move(snap), std::nullopt, std::move(beta)});
  }
  return rec;
}

Barenblatt::Barenblatt(double mass) : mass_(mass) {
  if (!(mass > 0.0)) throw InvalidArgument("barenblatt: mass must be > 0");
  // mass = (4/3) sqrt(12) C^{3/2}
  c_m_ = std::pow(3.0 * mass / (4.0 * std::sqrt(12.0)), 2.0 / 3.0);
}

double Barenblatt::value(double t, double x) const {
  if (!(t > 0.0)) throw InvalidArgument("barenblatt: t must be > 0");
  const double v = c_m_ - x * x / (12.0 * std::pow(t, 2.0 / 3.0));
  return v > 0.0 ? v / std::cbrt(t) : 0.0;
}

double Barenblatt::support_radius(double t) const {
  if (!(t > 0.0)) throw InvalidArgument("barenblatt: t must be > 0");
  return std::sqrt(12.0 * c_m_) * std::cbrt(t);
}

GridDensity Barenblatt::density(GridPtr grid, double t) const {
  const double r = support_radius(t);
  const double t23 = std::pow(t, 2.0 / 3.0);
  auto antiderivative = [&](double x) { return (c_m_ * x - x * x * x / (36.0 * t23)) / std::cbrt(t); };
  std::vector<double> v(grid->size(), 0.0);
  for (int i = 0; i < grid->size(); ++i) {
    const double a = std::max(grid->edge(i), -r);
    const double b = std::min(grid->edge(i + 1), r);
    if (b > a) v[i] = std::max(0.0, (antiderivative(b) - antiderivative(a)) / grid->dx());
  }
  return GridDensity(std::move(grid), std::move(v));
}

double barenblatt(double t, double x, double mass) { return Barenblatt(mass).value(t, x); }

OracleReport compare_to_oracle(const TrajectoryRecord& a, const TrajectoryRecord& b,
                               const std::vector<double>& times, double l1_budget) {
  OracleReport rep;
  for (double t : times) {
    const GridDensity& ra = interpolant(a, t).first;
    const GridDensity& rb = interpolant(b, t).first;
    OracleRow row;
    row.time = t;
    row.l1 = l1_distance(ra, rb);
    const double ma = mass(ra), mb = mass(rb);
    if (ma > 0.0 && std::abs(ma - mb) <= 1e-9 * std::max(ma, mb)) row.w2 = w2_1d(ra, rb);
    row.dbl_upper = dbl_bounds(ra, rb).upper;
    row.within_budget = row.l1 <= l1_budget;
    rep.max_l1 = std::max(rep.max_l1, row.l1);
    rep.within_budget = rep.within_budget && row.within_budget;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace jkoflow

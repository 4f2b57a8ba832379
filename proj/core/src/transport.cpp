#include "jkoflow/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "jkoflow/errors.hpp"
#include "jkoflow/weak_terms.hpp"

namespace jkoflow {

namespace {

bool strictly_increasing(std::span<const double> x) {
  for (std::size_t k = 1; k < x.size(); ++k) {
    if (!(x[k] > x[k - 1])) return false;
  }
  return true;
}

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double a : v) m = std::max(m, std::abs(a));
  return m;
}

// Weight of gap k in the interval stencil: the end gaps also carry the caps.
double gap_weight(int k, int gaps) {
  double w = 1.0;
  if (k == 0) w += 0.5;
  if (k == gaps - 1) w += 0.5;
  return w;
}

// Midpoint widths (X_{k+1} - X_{k-1}) / 2, one-sided at the ends.
void midpoint_widths(std::span<const double> x, std::vector<double>& d) {
  const int n = static_cast<int>(x.size());
  d.resize(n);
  d[0] = x[1] - x[0];
  d[n - 1] = x[n - 1] - x[n - 2];
  for (int k = 1; k + 1 < n; ++k) d[k] = 0.5 * (x[k + 1] - x[k - 1]);
}

// Thomas algorithm for a symmetric tridiagonal system; rhs is overwritten.
void solve_tridiagonal(std::span<const double> diag, std::span<const double> off,
                       std::span<double> rhs) {
  const std::size_t n = diag.size();
  std::vector<double> c(n, 0.0);
  double denom = diag[0];
  if (n > 1) c[0] = off[0] / denom;
  rhs[0] /= denom;
  for (std::size_t k = 1; k < n; ++k) {
    denom = diag[k] - off[k - 1] * c[k - 1];
    if (k + 1 < n) c[k] = off[k] / denom;
    rhs[k] = (rhs[k] - off[k - 1] * rhs[k - 1]) / denom;
  }
  for (std::size_t k = n - 1; k-- > 0;) rhs[k] -= c[k] * rhs[k + 1];
}

}  // namespace

void validate_jko_config(const JkoConfig& cfg) {
  if (cfg.particles < 2) throw InvalidArgument("jko: need at least 2 particles");
  if (!(cfg.grad_tol_rel > 0.0)) throw InvalidArgument("jko: gradient tolerance must be > 0");
  if (cfg.max_iterations < 1) throw InvalidArgument("jko: max iterations must be >= 1");
  if (!(cfg.armijo_shrink > 0.0 && cfg.armijo_shrink < 1.0)) {
    throw InvalidArgument("jko: line-search shrink factor must be in (0, 1)");
  }
  if (!(cfg.armijo_c > 0.0 && cfg.armijo_c < 1.0)) {
    throw InvalidArgument("jko: sufficient-decrease constant must be in (0, 1)");
  }
  if (cfg.max_backtracks < 1) throw InvalidArgument("jko: max backtracks must be >= 1");
  if (!(cfg.min_gap_rel > 0.0)) throw InvalidArgument("jko: min gap must be > 0");
}

JkoProblem::JkoProblem(const ParticleDensity& prev, std::vector<std::pair<double, double>> support,
                       double tau, const ModelSpec& spec, BesselKernel1D kernel,
                       EnergyStencil stencil)
    : anchor_(prev.positions().begin(), prev.positions().end()),
      mp_(prev.particle_mass()),
      potential_(std::move(support), kernel),
      tau_(tau),
      spec_(spec),
      kernel_(kernel),
      stencil_(stencil) {
  if (!(tau > 0.0)) throw InvalidArgument("jko: tau must be > 0");
}

double JkoProblem::transport_cost(std::span<const double> x) const {
  double s = 0.0;
  for (int k = 0; k < size(); ++k) {
    const double d = x[k] - anchor_[k];
    s += d * d;
  }
  return 0.5 * mp_ * s / tau_;
}

double JkoProblem::internal(std::span<const double> x) const {
  const int n = size();
  double s = 0.0;
  if (stencil_ == EnergyStencil::kInterval) {
    for (int k = 0; k + 1 < n; ++k) {
      const double gap = x[k + 1] - x[k];
      s += gap_weight(k, n - 1) * gap * phi(mp_ / gap, spec_);
    }
  } else {
    std::vector<double> d;
    midpoint_widths(x, d);
    for (double w : d) s += w * phi(mp_ / w, spec_);
  }
  return s;
}

double JkoProblem::interaction(std::span<const double> x) const {
  if (spec_.chi == 0.0) return 0.0;
  // sum_{j<k} exp(-(x_k - x_j)) by the running recursion A_k = e^{-gap}(A_{k-1} + 1).
  double a = 0.0, sum = 0.0;
  for (int k = 1; k < size(); ++k) {
    a = std::exp(-(x[k] - x[k - 1])) * (a + 1.0);
    sum += a;
  }
  return -0.5 * spec_.chi * mp_ * mp_ * kernel_.scale * (0.5 * size() + sum);
}

double JkoProblem::support(std::span<const double> x) const {
  if (spec_.chi == 0.0 || potential_.intervals().empty()) return 0.0;
  double s = 0.0;
  for (int k = 0; k < size(); ++k) s += potential_.value(x[k]);
  return -spec_.chi * mp_ * s;
}

EnergyParts JkoProblem::energy(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != size()) throw InvalidArgument("jko: wrong number of positions");
  return {internal(x), interaction(x), support(x)};
}

double JkoProblem::objective(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != size()) throw InvalidArgument("jko: wrong number of positions");
  if (!strictly_increasing(x)) return std::numeric_limits<double>::infinity();
  return transport_cost(x) + internal(x) + interaction(x) + support(x);
}

double JkoProblem::magnitude(std::span<const double> x) const {
  return transport_cost(x) + std::abs(internal(x)) + std::abs(interaction(x)) +
         std::abs(support(x));
}

double JkoProblem::gradient_scale(std::span<const double> x) const {
  const int n = size();
  double p = 0.0;
  for (int k = 0; k + 1 < n; ++k) p = std::max(p, pressure(mp_ / (x[k + 1] - x[k]), spec_));
  double drift = 0.0;
  for (int k = 0; k < n; ++k) drift = std::max(drift, std::abs(x[k] - anchor_[k]));
  return p + mp_ * drift / tau_ + spec_.chi * mp_ * kernel_.scale * (mp_ * n + 1.0);
}

void JkoProblem::gradient(std::span<const double> x, std::span<double> g) const {
  const int n = size();
  if (static_cast<int>(x.size()) != n || static_cast<int>(g.size()) != n) {
    throw InvalidArgument("jko: wrong number of positions");
  }
  for (int k = 0; k < n; ++k) g[k] = mp_ * (x[k] - anchor_[k]) / tau_;

  if (stencil_ == EnergyStencil::kInterval) {
    // dE/dgap = -w P(m_p / gap).
    for (int k = 0; k + 1 < n; ++k) {
      const double p = gap_weight(k, n - 1) * pressure(mp_ / (x[k + 1] - x[k]), spec_);
      g[k] += p;
      g[k + 1] -= p;
    }
  } else {
    std::vector<double> d;
    midpoint_widths(x, d);
    const double p0 = pressure(mp_ / d[0], spec_);
    g[0] += p0;
    g[1] -= p0;
    const double pn = pressure(mp_ / d[n - 1], spec_);
    g[n - 2] += pn;
    g[n - 1] -= pn;
    for (int k = 1; k + 1 < n; ++k) {
      const double p = 0.5 * pressure(mp_ / d[k], spec_);
      g[k - 1] += p;
      g[k + 1] -= p;
    }
  }

  if (spec_.chi != 0.0) {
    std::vector<double> a(n, 0.0), b(n, 0.0);
    for (int k = 1; k < n; ++k) a[k] = std::exp(-(x[k] - x[k - 1])) * (a[k - 1] + 1.0);
    for (int k = n - 2; k >= 0; --k) b[k] = std::exp(-(x[k + 1] - x[k])) * (b[k + 1] + 1.0);
    const double c = 0.5 * spec_.chi * mp_ * mp_ * kernel_.scale;
    for (int k = 0; k < n; ++k) g[k] -= c * (b[k] - a[k]);
    if (!potential_.intervals().empty()) {
      for (int k = 0; k < n; ++k) g[k] -= spec_.chi * mp_ * potential_.derivative(x[k]);
    }
  }
}

void JkoProblem::preconditioner(std::span<const double> x, std::span<double> diag,
                                std::span<double> off) const {
  const int n = size();
  std::fill(diag.begin(), diag.end(), mp_ / tau_);
  std::fill(off.begin(), off.end(), 0.0);
  if (stencil_ != EnergyStencil::kInterval) return;
  for (int k = 0; k + 1 < n; ++k) {
    const double gap = x[k + 1] - x[k];
    const double s = mp_ / gap;
    const double h = gap_weight(k, n - 1) * s * s * phi_second(s, spec_) / gap;
    diag[k] += h;
    diag[k + 1] += h;
    off[k] -= h;
  }
}

double jko_objective(std::span<const double> x, const ParticleDensity& prev,
                     const SupportIndicator& beta, double tau, const ModelSpec& spec,
                     const KernelTable& tab, EnergyStencil stencil) {
  if (static_cast<int>(x.size()) != prev.size()) throw InvalidArgument("jko: wrong number of positions");
  if (!strictly_increasing(x)) throw InvalidArgument("jko: positions must be strictly increasing");
  const JkoProblem problem(prev, beta.intervals(), tau, spec, tab.kernel(), stencil);
  return problem.objective(x);
}

std::vector<double> jko_gradient(std::span<const double> x, const ParticleDensity& prev,
                                 const SupportIndicator& beta, double tau, const ModelSpec& spec,
                                 const KernelTable& tab, EnergyStencil stencil) {
  if (static_cast<int>(x.size()) != prev.size()) throw InvalidArgument("jko: wrong number of positions");
  if (!strictly_increasing(x)) throw InvalidArgument("jko: positions must be strictly increasing");
  const JkoProblem problem(prev, beta.intervals(), tau, spec, tab.kernel(), stencil);
  std::vector<double> g(x.size());
  problem.gradient(x, g);
  return g;
}

EnergyParts lagrangian_energy(const ParticleDensity& particles, const SupportIndicator& beta,
                              const ModelSpec& spec, const KernelTable& tab,
                              EnergyStencil stencil) {
  const JkoProblem problem(particles, beta.intervals(), 1.0, spec, tab.kernel(), stencil);
  return problem.energy(particles.positions());
}

ParticleStep jko_step_particles(const ParticleDensity& prev, const SupportIndicator& beta,
                                double tau, const ModelSpec& spec, const JkoConfig& cfg,
                                const KernelTable& tab) {
  validate_jko_config(cfg);
  const JkoProblem problem(prev, beta.intervals(), tau, spec, tab.kernel(), cfg.stencil);
  const int n = problem.size();
  const double min_gap = cfg.min_gap_rel * tab.grid().half_width();
  constexpr double kEps = std::numeric_limits<double>::epsilon();

  std::vector<double> x(prev.positions().begin(), prev.positions().end());
  std::vector<double> g(n), d(n), trial(n), diag(n), off(std::max(n - 1, 0));

  JkoReport rep;
  rep.energy_prev = problem.energy(x);
  double f = problem.objective(x);
  rep.objective_initial = f;
  problem.gradient(x, g);
  double gnorm = inf_norm(g);
  rep.grad_norm_initial = gnorm;
  rep.tolerance = std::max(cfg.grad_tol_rel * gnorm, 1e-13 * problem.gradient_scale(x));

  for (int it = 0; it < cfg.max_iterations; ++it) {
    if (gnorm <= rep.tolerance) {
      rep.converged = true;
      break;
    }
    if (cfg.preconditioner == Preconditioner::kTridiagonal) {
      problem.preconditioner(x, diag, off);
      for (int k = 0; k < n; ++k) d[k] = -g[k];
      solve_tridiagonal(diag, off, d);
    } else {
      for (int k = 0; k < n; ++k) d[k] = -g[k] * tau / problem.particle_mass();
    }

    // Armijo along the projection arc. Differences below the objective's
    // rounding floor are accepted so the gradient can keep shrinking.
    const double noise = 16.0 * kEps * problem.magnitude(x);
    double alpha = 1.0;
    bool accepted = false;
    double f_trial = f;
    for (int bt = 0; bt < cfg.max_backtracks; ++bt) {
      for (int k = 0; k < n; ++k) trial[k] = x[k] + alpha * d[k];
      enforce_min_gap(trial, min_gap);
      f_trial = problem.objective(trial);
      double predicted = 0.0;
      for (int k = 0; k < n; ++k) predicted += g[k] * (trial[k] - x[k]);
      if (f_trial <= f + cfg.armijo_c * predicted + noise) {
        accepted = true;
        break;
      }
      alpha *= cfg.armijo_shrink;
      ++rep.backtracks;
    }
    if (!accepted) break;
    x.swap(trial);
    f = f_trial;
    problem.gradient(x, g);
    gnorm = inf_norm(g);
    rep.iterations = it + 1;
  }
  if (!rep.converged && gnorm <= rep.tolerance) rep.converged = true;

  if (f > rep.objective_initial) {
    // Only rounding-level moves were accepted; the start point is at least as good.
    x.assign(prev.positions().begin(), prev.positions().end());
    f = rep.objective_initial;
    problem.gradient(x, g);
    gnorm = inf_norm(g);
    rep.converged = gnorm <= rep.tolerance;
  }

  rep.objective_final = f;
  rep.grad_norm_final = gnorm;
  rep.energy_new = problem.energy(x);
  rep.w2_moved = std::sqrt(2.0 * tau * problem.transport_cost(x));
  return {ParticleDensity(std::move(x), prev.particle_mass()), rep};
}

std::pair<GridDensity, JkoReport> jko_step(const GridDensity& prev, const SupportIndicator& beta,
                                           double tau, const ModelSpec& spec, const JkoConfig& cfg,
                                           const KernelTable& tab) {
  require_same_grid(prev.grid(), tab.grid(), "jko_step");
  if (!(mass(prev) > 0.0)) throw EmptyDensityError("jko_step: zero mass");
  const ParticleDensity particles = quantile_particles(
      partition_of(prev), cfg.particles, cfg.min_gap_rel * prev.grid().half_width());
  auto step = jko_step_particles(particles, beta, tau, spec, cfg, tab);
  return {to_grid(step.next, prev.grid_ptr()), step.report};
}

double optimality_residual(const GridDensity& rho_new, const GridDensity& rho_prev,
                           const SupportIndicator& beta, double tau, const ModelSpec& spec,
                           const KernelTable& tab, const std::vector<BumpFunction>& battery) {
  require_same_grid(rho_new.grid(), rho_prev.grid(), "optimality_residual");
  require_same_grid(rho_new.grid(), tab.grid(), "optimality_residual");
  const IndicatorPotential potential(beta, tab.kernel());
  double worst = 0.0;
  for (const auto& phi : battery) {
    const double lhs = (pairing(rho_prev, phi) - pairing(rho_new, phi)) / tau;
    double rhs = pressure_term(rho_new, phi, spec);
    if (spec.chi != 0.0) {
      rhs -= spec.chi * interaction_term_symmetric(rho_new, phi, tab);
      rhs -= spec.chi * support_term(rho_new, phi, potential);
    }
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

}  // namespace jkoflow

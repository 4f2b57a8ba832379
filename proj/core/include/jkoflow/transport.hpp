#pragma once

#include <span>
#include <utility>
#include <vector>

#include "jkoflow/grid.hpp"
#include "jkoflow/kernel.hpp"
#include "jkoflow/model.hpp"
#include "jkoflow/test_functions.hpp"

namespace jkoflow {

/// How the internal energy sees the ladder.
///   kInterval: mass m_p on every gap, half-mass caps at the ends (matches to_grid).
///   kMidpoint: particle k spread over (X_{k+1} - X_{k-1}) / 2, one-sided at the ends.
enum class EnergyStencil { kInterval, kMidpoint };

/// Search direction: raw Wasserstein gradient, or the gradient preconditioned
/// by the tridiagonal Hessian of the transport and internal-energy terms.
enum class Preconditioner { kNone, kTridiagonal };

struct JkoConfig {
  int particles = 400;
  /// Stop when |grad|_inf <= grad_tol_rel * |grad at start|_inf.
  double grad_tol_rel = 1e-8;
  int max_iterations = 500;
  double armijo_shrink = 0.5;
  double armijo_c = 1e-4;
  int max_backtracks = 60;
  /// Gap floor as a multiple of the domain half-width.
  double min_gap_rel = 1e-10;
  EnergyStencil stencil = EnergyStencil::kInterval;
  Preconditioner preconditioner = Preconditioner::kTridiagonal;
};

void validate_jko_config(const JkoConfig& cfg);

struct JkoReport {
  int iterations = 0;
  int backtracks = 0;
  double grad_norm_initial = 0.0;
  double grad_norm_final = 0.0;
  double tolerance = 0.0;
  double objective_initial = 0.0;
  double objective_final = 0.0;
  /// W2 between the previous and the new ladder.
  double w2_moved = 0.0;
  bool converged = false;
  /// F[prev | prev] and F[new | prev] on the particle representation.
  EnergyParts energy_prev;
  EnergyParts energy_new;
};

/// One proximal step in particle coordinates, with the support set frozen.
class JkoProblem {
 public:
  JkoProblem(const ParticleDensity& prev, std::vector<std::pair<double, double>> support,
             double tau, const ModelSpec& spec, BesselKernel1D kernel,
             EnergyStencil stencil = EnergyStencil::kInterval);

  int size() const { return static_cast<int>(anchor_.size()); }
  double particle_mass() const { return mp_; }
  double tau() const { return tau_; }
  std::span<const double> anchor() const { return anchor_; }

  /// +inf when x is not strictly increasing.
  double objective(std::span<const double> x) const;
  double transport_cost(std::span<const double> x) const;
  EnergyParts energy(std::span<const double> x) const;
  void gradient(std::span<const double> x, std::span<double> g) const;
  /// Sum of absolute term sizes; sets the floating-point noise floor of objective().
  double magnitude(std::span<const double> x) const;
  /// Scale of individual gradient contributions; sets an absolute tolerance floor.
  double gradient_scale(std::span<const double> x) const;
  /// Tridiagonal SPD preconditioner: diag has size n, off has size n - 1.
  void preconditioner(std::span<const double> x, std::span<double> diag,
                      std::span<double> off) const;

 private:
  double internal(std::span<const double> x) const;
  double interaction(std::span<const double> x) const;
  double support(std::span<const double> x) const;

  std::vector<double> anchor_;
  double mp_;
  IndicatorPotential potential_;
  double tau_;
  ModelSpec spec_;
  BesselKernel1D kernel_;
  EnergyStencil stencil_;
};

/// Objective and gradient in the free-function form; nonmonotone x throws.
double jko_objective(std::span<const double> x, const ParticleDensity& prev,
                     const SupportIndicator& beta, double tau, const ModelSpec& spec,
                     const KernelTable& tab, EnergyStencil stencil = EnergyStencil::kInterval);
std::vector<double> jko_gradient(std::span<const double> x, const ParticleDensity& prev,
                                 const SupportIndicator& beta, double tau, const ModelSpec& spec,
                                 const KernelTable& tab,
                                 EnergyStencil stencil = EnergyStencil::kInterval);

/// F[particles | beta] on the particle representation.
EnergyParts lagrangian_energy(const ParticleDensity& particles, const SupportIndicator& beta,
                              const ModelSpec& spec, const KernelTable& tab,
                              EnergyStencil stencil = EnergyStencil::kInterval);

struct ParticleStep {
  ParticleDensity next;
  JkoReport report;
};

ParticleStep jko_step_particles(const ParticleDensity& prev, const SupportIndicator& beta,
                                double tau, const ModelSpec& spec, const JkoConfig& cfg,
                                const KernelTable& tab);

std::pair<GridDensity, JkoReport> jko_step(const GridDensity& prev, const SupportIndicator& beta,
                                           double tau, const ModelSpec& spec, const JkoConfig& cfg,
                                           const KernelTable& tab);

/// Max over the battery of |(1/tau) int phi (rho_prev - rho_new) - dF[rho_new](phi')|.
double optimality_residual(const GridDensity& rho_new, const GridDensity& rho_prev,
                           const SupportIndicator& beta, double tau, const ModelSpec& spec,
                           const KernelTable& tab,
                           const std::vector<BumpFunction>& battery = phi_battery());

}  // namespace jkoflow

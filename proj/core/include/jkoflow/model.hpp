#pragma once

#include <string>

#include "jkoflow/grid.hpp"
#include "jkoflow/kernel.hpp"

namespace jkoflow {

enum class PhiFamily { kPower };

/// Model nonlinearities and coefficients. Defaults:
///   Phi(s) = s^gamma / (gamma - 1), M(s) = k_M s (1 - s), h(s) = k_h s / (1 + s).
struct ModelSpec {
  double gamma = 2.0;
  double chi = 1.0;
  double k_m = 0.0;
  double k_h = 1.0;
  /// Absolute support threshold; cells strictly above it belong to S.
  double theta_supp = 0.0;
  PhiFamily phi_family = PhiFamily::kPower;

  /// Constants of c s^{gamma-2} <= Phi''(s) <= C s^{gamma-2}.
  double c_gamma() const;
  double big_c_gamma() const;
};

/// Throws InvalidArgument on out-of-range coefficients or a failed
/// growth-sandwich check of the selected Phi.
void validate_model(const ModelSpec& spec);

double phi(double s, const ModelSpec& spec);
double phi_prime(double s, const ModelSpec& spec);
double phi_second(double s, const ModelSpec& spec);
/// P(s) = s Phi'(s) - Phi(s) = int_0^s z Phi''(z) dz.
double pressure(double s, const ModelSpec& spec);
/// d/ds P(s) = s Phi''(s).
double pressure_prime(double s, const ModelSpec& spec);
/// f(z) = Phi(z^{2/gamma}).
double f_of(double z, const ModelSpec& spec);
double reaction_m(double s, const ModelSpec& spec);
double saturation_h(double s, const ModelSpec& spec);

struct EnergyParts {
  double internal = 0.0;
  double interaction = 0.0;
  double support = 0.0;

  double total() const { return internal + interaction + support; }
};

double internal_energy(const GridDensity& rho, const ModelSpec& spec);
double interaction_energy(const GridDensity& rho, const KernelTable& tab, const ModelSpec& spec);
double support_energy(const GridDensity& rho, const SupportIndicator& beta, const KernelTable& tab,
                      const ModelSpec& spec);
EnergyParts energy_parts(const GridDensity& rho, const SupportIndicator& beta,
                         const KernelTable& tab, const ModelSpec& spec);
double total_energy(const GridDensity& rho, const SupportIndicator& beta, const KernelTable& tab,
                    const ModelSpec& spec);

SupportIndicator support_set(const GridDensity& rho, double theta_supp);
SupportIndicator empty_support(GridPtr grid);

/// Default threshold: 1e-10 * max(rho0).
double default_support_threshold(const GridDensity& rho0);

std::string to_string(PhiFamily f);

}  // namespace jkoflow

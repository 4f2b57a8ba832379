#include "jkoflow/model.hpp"

#include <cmath>

#include "jkoflow/errors.hpp"

namespace jkoflow {

namespace {

void require_nonnegative(double s, const char* what) {
  if (!(s >= 0.0)) throw InvalidArgument(std::string(what) + ": argument must be >= 0");
}

}  // namespace

double ModelSpec::c_gamma() const { return gamma; }
double ModelSpec::big_c_gamma() const { return gamma; }

void validate_model(const ModelSpec& spec) {
  if (!(spec.gamma > 1.0) || !std::isfinite(spec.gamma)) throw InvalidArgument("gamma must be > 1");
  if (!(spec.chi >= 0.0)) throw InvalidArgument("chi must be >= 0");
  if (!(spec.k_m >= 0.0)) throw InvalidArgument("k_M must be >= 0");
  if (!(spec.k_h > 0.0)) throw InvalidArgument("k_h must be > 0");
  if (!(spec.theta_supp >= 0.0)) throw InvalidArgument("support threshold must be >= 0");
  // Sandwich on 200 log-spaced points in [1e-6, 1e3].
  const double lo = spec.c_gamma(), hi = spec.big_c_gamma();
  for (int k = 0; k < 200; ++k) {
    const double s = std::pow(10.0, -6.0 + 9.0 * k / 199.0);
    const double ref = std::pow(s, spec.gamma - 2.0);
    const double d2 = phi_second(s, spec);
    if (d2 < lo * ref * (1.0 - 1e-12) || d2 > hi * ref * (1.0 + 1e-12)) {
      throw InvalidArgument("Phi fails the growth sandwich");
    }
  }
}

double phi(double s, const ModelSpec& spec) {
  require_nonnegative(s, "phi");
  return std::pow(s, spec.gamma) / (spec.gamma - 1.0);
}

double phi_prime(double s, const ModelSpec& spec) {
  require_nonnegative(s, "phi_prime");
  return spec.gamma * std::pow(s, spec.gamma - 1.0) / (spec.gamma - 1.0);
}

double phi_second(double s, const ModelSpec& spec) {
  require_nonnegative(s, "phi_second");
  return spec.gamma * std::pow(s, spec.gamma - 2.0);
}

double pressure(double s, const ModelSpec& spec) {
  require_nonnegative(s, "pressure");
  return std::pow(s, spec.gamma);
}

double pressure_prime(double s, const ModelSpec& spec) {
  require_nonnegative(s, "pressure_prime");
  return spec.gamma * std::pow(s, spec.gamma - 1.0);
}

double f_of(double z, const ModelSpec& spec) {
  require_nonnegative(z, "f");
  return phi(std::pow(z, 2.0 / spec.gamma), spec);
}

double reaction_m(double s, const ModelSpec& spec) { return spec.k_m * s * (1.0 - s); }

double saturation_h(double s, const ModelSpec& spec) { return spec.k_h * s / (1.0 + s); }

double internal_energy(const GridDensity& rho, const ModelSpec& spec) {
  double s = 0.0;
  for (double v : rho.values()) s += phi(v, spec);
  return s * rho.grid().dx();
}

double interaction_energy(const GridDensity& rho, const KernelTable& tab, const ModelSpec& spec) {
  if (spec.chi == 0.0) return 0.0;
  const auto c = convolve(rho, tab);
  double s = 0.0;
  for (int i = 0; i < rho.size(); ++i) s += rho[i] * c.values[i];
  return -0.5 * spec.chi * s * rho.grid().dx();
}

double support_energy(const GridDensity& rho, const SupportIndicator& beta, const KernelTable& tab,
                      const ModelSpec& spec) {
  require_same_grid(rho.grid(), *beta.grid, "support_energy");
  if (spec.chi == 0.0 || beta.count() == 0) return 0.0;
  const auto c = convolve_indicator(beta, tab);
  double s = 0.0;
  for (int i = 0; i < rho.size(); ++i) s += rho[i] * c.values[i];
  return -spec.chi * s * rho.grid().dx();
}

EnergyParts energy_parts(const GridDensity& rho, const SupportIndicator& beta,
                         const KernelTable& tab, const ModelSpec& spec) {
  return {internal_energy(rho, spec), interaction_energy(rho, tab, spec),
          support_energy(rho, beta, tab, spec)};
}

double total_energy(const GridDensity& rho, const SupportIndicator& beta, const KernelTable& tab,
                    const ModelSpec& spec) {
  return energy_parts(rho, beta, tab, spec).total();
}

SupportIndicator support_set(const GridDensity& rho, double theta_supp) {
  SupportIndicator b{rho.grid_ptr(), std::vector<unsigned char>(rho.size(), 0)};
  for (int i = 0; i < rho.size(); ++i) b.cells[i] = rho[i] > theta_supp ? 1 : 0;
  return b;
}

SupportIndicator empty_support(GridPtr grid) {
  const int n = grid->size();
  return SupportIndicator{std::move(grid), std::vector<unsigned char>(n, 0)};
}

double default_support_threshold(const GridDensity& rho0) { return 1e-10 * max_value(rho0); }

std::string to_string(PhiFamily f) {
  switch (f) {
    case PhiFamily::kPower:
      return "power";
  }
  return "unknown";
}

}  // namespace jkoflow

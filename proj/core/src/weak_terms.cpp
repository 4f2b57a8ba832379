#include "jkoflow/weak_terms.hpp"

namespace jkoflow {

double pairing(const GridDensity& rho, const BumpFunction& phi) {
  const auto& g = rho.grid();
  double s = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    if (rho[i] != 0.0) s += phi.value(g.center(i)) * rho[i];
  }
  return s * g.dx();
}

double pressure_term(const GridDensity& rho, const BumpFunction& phi, const ModelSpec& spec) {
  const auto& g = rho.grid();
  double s = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    if (rho[i] != 0.0) s += pressure(rho[i], spec) * phi.d2(g.center(i));
  }
  return -s * g.dx();
}

double interaction_term_symmetric(const GridDensity& rho, const BumpFunction& phi,
                                  const KernelTable& tab) {
  require_same_grid(rho.grid(), tab.grid(), "interaction_term_symmetric");
  const auto& g = rho.grid();
  const int n = g.size();
  std::vector<double> dphi(n);
  for (int i = 0; i < n; ++i) dphi[i] = phi.d1(g.center(i));
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    if (rho[i] == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      if (rho[j] == 0.0) continue;
      s += tab.derivative(i - j) * (dphi[i] - dphi[j]) * rho[i] * rho[j];
    }
  }
  return 0.5 * s * g.dx() * g.dx();
}

double interaction_term(const GridDensity& rho, const BumpFunction& phi,
                        const ScalarField& grad_k_rho) {
  const auto& g = rho.grid();
  double s = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    if (rho[i] != 0.0) s += rho[i] * phi.d1(g.center(i)) * grad_k_rho.values[i];
  }
  return s * g.dx();
}

double support_term(const GridDensity& rho, const BumpFunction& phi,
                    const IndicatorPotential& potential) {
  const auto& g = rho.grid();
  double s = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    if (rho[i] == 0.0) continue;
    const double x = g.center(i);
    const double d = phi.d1(x);
    if (d != 0.0) s += rho[i] * d * potential.derivative(x);
  }
  return s * g.dx();
}

double reaction_term(const GridDensity& rho, const BumpFunction& phi, const ModelSpec& spec) {
  const auto& g = rho.grid();
  double s = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    if (rho[i] != 0.0) s += reaction_m(rho[i], spec) * phi.value(g.center(i));
  }
  return s * g.dx();
}

}  // namespace jkoflow

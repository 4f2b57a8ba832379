#include "jkoflow/reaction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "jkoflow/errors.hpp"

namespace jkoflow {

double reaction_flow(double s, double tau, const ModelSpec& spec) {
  if (!(tau >= 0.0)) throw InvalidArgument("reaction: tau must be >= 0");
  if (spec.k_m == 0.0 || tau == 0.0 || s == 0.0) return s;
  // step against the local stiffness k_M |1 - 2s|; the flow moves s toward 1
  const double max_dt = std::min(tau, 0.02 / (spec.k_m * std::max(1.0, std::abs(1.0 - 2.0 * s))));
  const int substeps = static_cast<int>(std::ceil(tau / max_dt - 1e-12));
  const double dt = tau / substeps;
  for (int k = 0; k < substeps; ++k) {
    const double k1 = reaction_m(s, spec);
    const double k2 = reaction_m(s + 0.5 * dt * k1, spec);
    const double k3 = reaction_m(s + 0.5 * dt * k2, spec);
    const double k4 = reaction_m(s + dt * k3, spec);
    s += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return s;
}

GridDensity reaction_step(const GridDensity& rho, double tau, const ModelSpec& spec,
                          double* clamped) {
  std::vector<double> v(rho.values().begin(), rho.values().end());
  double worst = 0.0;
  for (double& s : v) {
    s = reaction_flow(s, tau, spec);
    if (s < 0.0) {
      worst = std::max(worst, -s);
      s = 0.0;
    }
  }
  if (clamped) *clamped = worst;
  return GridDensity(rho.grid_ptr(), std::move(v));
}

Partition reaction_step(const Partition& part, double tau, const ModelSpec& spec) {
  Partition out = part;
  for (double& s : out.density) s = std::max(reaction_flow(s, tau, spec), 0.0);
  return out;
}

namespace {

double ratio(double after, double before) {
  if (before == 0.0) return after == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return after / before;
}

}  // namespace

GronwallReport gronwall_check(const GridDensity& before, const GridDensity& after, double tau,
                              double gamma, const ModelSpec& spec) {
  require_same_grid(before.grid(), after.grid(), "gronwall_check");
  GronwallReport r;
  r.bound = std::exp(gamma * spec.k_m * tau) * (1.0 + 10.0 * before.grid().dx());
  r.ratio_lgamma = std::pow(ratio(lp_norm_pow(after, gamma), lp_norm_pow(before, gamma)), 1.0 / gamma);
  r.ratio_m2 = ratio(second_moment(after), second_moment(before));
  r.ratio_h1 = std::sqrt(ratio(h1_seminorm_pow(after, gamma), h1_seminorm_pow(before, gamma)));
  r.pass_lgamma = r.ratio_lgamma <= r.bound;
  r.pass_m2 = r.ratio_m2 <= r.bound;
  r.pass_h1 = r.ratio_h1 <= r.bound;
  return r;
}

}  // namespace jkoflow

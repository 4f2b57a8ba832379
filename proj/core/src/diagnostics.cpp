#include "jkoflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "jkoflow/errors.hpp"
#include "jkoflow/metrics.hpp"
#include "jkoflow/weak_terms.hpp"

namespace jkoflow {

namespace {

// Snapshot index k with k tau = t, or throw.
int aligned_step(const TrajectoryRecord& rec, double t, const char* where) {
  const double q = t / rec.tau;
  const double r = std::round(q);
  if (std::abs(q - r) > 1e-9 * std::max(1.0, q)) {
    throw InvalidArgument(std::string(where) + ": time is not a step boundary");
  }
  return static_cast<int>(r);
}

}  // namespace

DissipationReport dissipation_check(const TrajectoryRecord& rec) {
  DissipationReport rep;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (const auto& log : rec.log) {
    if (!log.has_transport) continue;
    DissipationRow row;
    row.step = log.step;
    row.lhs = log.jko.w2_moved * log.jko.w2_moved / (2.0 * rec.tau);
    const double f_prev = log.jko.energy_prev.total();
    row.rhs = f_prev - log.jko.energy_new.total();
    row.slack = 1e-9 * (1.0 + std::abs(f_prev));
    row.passed = row.margin() >= 0.0;
    rep.passed = rep.passed && row.passed;
    rep.worst_margin = std::min(rep.worst_margin, row.margin());
    rep.rows.push_back(row);
  }
  if (rep.rows.empty()) rep.worst_margin = 0.0;
  return rep;
}

W2SumReport w2_sum_check(const TrajectoryRecord& rec) {
  W2SumReport rep;
  if (rec.log.empty()) return rep;
  const double m = rec.log.front().mass_before;
  const double chi = rec.spec.chi;
  const double tau = rec.tau;
  rep.c = chi * m * m;
  rep.a0 = rec.log.front().jko.energy_prev.internal;
  rep.k0 = rec.log.front().jko.energy_prev.interaction;
  double sum = 0.0;
  int n = 0;
  for (const auto& log : rec.log) {
    if (!log.has_transport) continue;
    ++n;
    sum += log.jko.w2_moved * log.jko.w2_moved;
    W2SumRow row;
    row.step = log.step;
    row.cumulative = sum;
    row.bound = 4.0 * tau * (rep.a0 + rep.k0) + rep.c * tau + 4.0 * n * chi * chi * m * tau * tau;
    row.bound += 1e-9 * (1.0 + std::abs(row.bound));
    row.passed = row.cumulative <= row.bound;
    rep.passed = rep.passed && row.passed;
    rep.rows.push_back(row);
  }
  return rep;
}

RegularityReport regularity_check(const TrajectoryRecord& rec, double gamma) {
  RegularityReport rep;
  rep.tau = rec.tau;
  for (std::size_t k = 0; k < rec.snapshots.size(); ++k) {
    const Snapshot& snap = rec.snapshots[k];
    rep.times.push_back(snap.time);
    rep.entropy.push_back(entropy(snap.rho));
    if (k == 0) continue;
    // thinned records weight each stored snapshot by the gap it covers
    const double span = rec.tau * (snap.step - rec.snapshots[k - 1].step);
    rep.h1_integral += span * (lp_norm_pow(snap.rho, gamma) + h1_seminorm_pow(snap.rho, gamma));
  }
  return rep;
}

RegularityComparison compare_regularity(const std::vector<RegularityReport>& levels,
                                        double max_ratio_allowed) {
  RegularityComparison cmp;
  if (levels.empty()) return cmp;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& l : levels) {
    cmp.h1_integrals.push_back(l.h1_integral);
    lo = std::min(lo, l.h1_integral);
    hi = std::max(hi, l.h1_integral);
  }
  cmp.max_ratio = lo > 0.0 ? hi / lo : (hi == 0.0 ? 1.0 : std::numeric_limits<double>::infinity());
  cmp.uniform = cmp.max_ratio <= max_ratio_allowed;

  const auto& coarse = levels.front();
  double slope = 0.0;
  for (std::size_t k = 1; k < coarse.times.size(); ++k) {
    slope = std::max(slope, (coarse.entropy[k] - coarse.entropy[0]) / coarse.times[k]);
  }
  cmp.c_ent = 2.0 * slope;
  for (const auto& l : levels) {
    const double h0 = l.entropy.front();
    for (std::size_t k = 0; k < l.times.size(); ++k) {
      const double bound = h0 + cmp.c_ent * l.times[k] + 1e-12 * (1.0 + std::abs(h0));
      if (l.entropy[k] > bound) cmp.entropy_bounded = false;
    }
  }
  return cmp;
}

double constraint_residual(const TrajectoryRecord& rec, const std::vector<SpaceTimeProbe>& battery) {
  const ModelSpec& spec = rec.spec;
  std::vector<double> sums(battery.size(), 0.0);
  for (std::size_t k = 1; k < rec.snapshots.size(); ++k) {
    const Snapshot& snap = rec.snapshots[k];
    // thinned records: each stored step stands for the steps since the previous one
    const int span = snap.step - rec.snapshots[k - 1].step;
    const Grid& g = snap.rho.grid();
    for (int i = 0; i < g.size(); ++i) {
      const double r = snap.rho[i];
      if (r == 0.0 || snap.beta.cells[i]) continue;
      const double w = span * saturation_h(r, spec) * g.dx();
      for (std::size_t b = 0; b < battery.size(); ++b) {
        sums[b] += w * battery[b].value(snap.time, g.center(i));
      }
    }
  }
  double worst = 0.0;
  for (double s : sums) worst = std::max(worst, std::abs(rec.tau * s));
  return worst;
}

double weak_form_residual(const TrajectoryRecord& rec, const std::vector<BumpFunction>& battery,
                          double t, double s, BesselKernel1D kernel) {
  if (!(t >= 0.0 && t < s)) throw InvalidArgument("weak_form_residual: need 0 <= t < s");
  const int k0 = aligned_step(rec, t, "weak_form_residual");
  const int k1 = aligned_step(rec, s, "weak_form_residual");
  if (k1 > rec.last_step()) throw InvalidArgument("weak_form_residual: s beyond the record");
  const ModelSpec& spec = rec.spec;
  const GridDensity& rho_t = rec.at_step(k0).rho;
  const GridDensity& rho_s = rec.at_step(k1).rho;

  std::vector<double> acc(battery.size(), 0.0);
  for (std::size_t b = 0; b < battery.size(); ++b) {
    acc[b] = pairing(rho_s, battery[b]) - pairing(rho_t, battery[b]);
  }
  for (int k = k0 + 1; k <= k1; ++k) {
    const Snapshot& snap = rec.at_step(k);
    const GridDensity& rho = snap.rho;
    ScalarField grad;
    std::vector<std::pair<double, double>> none;
    const bool coupled = spec.chi != 0.0;
    if (coupled) {
      const KernelTable tab(rho.grid_ptr(), kernel);
      grad = convolve_gradient(rho.values(), tab);
    }
    const IndicatorPotential potential =
        coupled ? IndicatorPotential(snap.beta, kernel) : IndicatorPotential(none, kernel);
    for (std::size_t b = 0; b < battery.size(); ++b) {
      const auto& phi = battery[b];
      // -int P phi'' - chi int rho phi' K' * (rho + beta) - int M phi
      double flux = pressure_term(rho, phi, spec);
      if (coupled) {
        flux -= spec.chi * interaction_term(rho, phi, grad);
        flux -= spec.chi * support_term(rho, phi, potential);
      }
      if (spec.k_m != 0.0) flux -= reaction_term(rho, phi, spec);
      acc[b] += rec.tau * flux;
    }
  }
  double worst = 0.0;
  for (double a : acc) worst = std::max(worst, std::abs(a));
  return worst;
}

double record_distance(const GridDensity& a, const GridDensity& b) {
  const double ma = mass(a), mb = mass(b);
  if (ma > 0.0 && std::abs(ma - mb) <= 1e-9 * std::max(ma, mb)) return w2_1d(a, b);
  return dbl_bounds(a, b).upper;
}

SelfConvergenceReport self_convergence(const std::vector<const TrajectoryRecord*>& levels) {
  SelfConvergenceReport rep;
  if (levels.size() < 2) return rep;
  const TrajectoryRecord& coarse = *levels.front();
  for (std::size_t l = 0; l + 1 < levels.size(); ++l) {
    const auto& a = *levels[l];
    const auto& b = *levels[l + 1];
    double sup = 0.0;
    for (int k = 1; k <= coarse.last_step(); ++k) {
      if (!coarse.has_step(k)) continue;
      const double t = k * coarse.tau;
      if (t > a.last_step() * a.tau * (1 + 1e-12) || t > b.last_step() * b.tau * (1 + 1e-12)) break;
      sup = std::max(sup, record_distance(interpolant(a, t).first, interpolant(b, t).first));
    }
    rep.distances.push_back(sup);
  }
  for (std::size_t l = 0; l + 1 < rep.distances.size(); ++l) {
    const double d0 = rep.distances[l], d1 = rep.distances[l + 1];
    rep.rates.push_back(d1 > 0.0 && d0 > 0.0 ? std::log2(d0 / d1)
                                             : std::numeric_limits<double>::infinity());
    if (d1 > d0) rep.monotone = false;
  }
  return rep;
}

HolderFit holder_constant(const TrajectoryRecord& rec, double dt) {
  HolderFit fit;
  const int stride = aligned_step(rec, dt, "holder_constant");
  if (stride < 1) throw InvalidArgument("holder_constant: dt must be >= tau");
  const int last = rec.last_step();
  for (int k = 0; k + stride <= last; k += stride) {
    if (!rec.has_step(k)) continue;
    for (int j = stride; k + j <= last; j *= 2) {
      if (!rec.has_step(k + j)) continue;
      const double d = record_distance(rec.at_step(k).rho, rec.at_step(k + j).rho);
      fit.constant = std::max(fit.constant, d / std::sqrt(j * rec.tau));
      ++fit.pairs;
    }
  }
  return fit;
}

}  // namespace jkoflow

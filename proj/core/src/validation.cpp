#include "jkoflow/validation.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "jkoflow/config.hpp"
#include "jkoflow/diagnostics.hpp"
#include "jkoflow/errors.hpp"
#include "jkoflow/metrics.hpp"
#include "jkoflow/oracle.hpp"
#include "jkoflow/presets.hpp"
#include "jkoflow/reaction.hpp"
#include "jkoflow/runner.hpp"
#include "jkoflow/transport.hpp"

namespace jkoflow {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kTauLevels[] = {4e-3, 2e-3, 1e-3};

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

bool is_fv(const std::string& preset_name) {
  return parse_mode(preset(preset_name).at("mode").get<std::string>()) == SchemeMode::kFiniteVolume;
}

// Lazily computed simulations shared by all criteria.
class RunCache {
 public:
  explicit RunCache(double kernel_scale) : kernel_scale_(kernel_scale) {}

  RunConfig config(const std::string& name, double tau) const {
    nlohmann::json doc = preset(name);
    doc["tau"] = tau;
    doc["kernel_scale"] = kernel_scale_;
    return parse_config(doc);
  }

  double preset_tau(const std::string& name) const { return preset(name).at("tau").get<double>(); }

  const Simulation& get(const std::string& name, double tau) {
    const auto key = std::make_pair(name, tau);
    auto it = sims_.find(key);
    if (it != sims_.end()) return it->second;
    const auto start = Clock::now();
    Simulation sim = simulate(config(name, tau));
    seconds_[key] = seconds_since(start);
    return sims_.emplace(key, std::move(sim)).first->second;
  }

  double seconds(const std::string& name, double tau) {
    get(name, tau);
    return seconds_[std::make_pair(name, tau)];
  }

  double kernel_scale() const { return kernel_scale_; }

 private:
  double kernel_scale_;
  std::map<std::pair<std::string, double>, Simulation> sims_;
  std::map<std::pair<std::string, double>, double> seconds_;
};

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void fail_if(bool bad, const std::string& why) {
    if (bad) {
      if (!passed) detail << "; ";
      passed = false;
      detail << why;
    }
  }
};

std::vector<std::string> transport_presets() {
  std::vector<std::string> out;
  for (const auto& n : preset_names()) {
    if (!is_fv(n)) out.push_back(n);
  }
  return out;
}

// 1
Outcome check_dissipation(RunCache& cache) {
  Outcome o;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& name : transport_presets()) {
    const double tau = cache.preset_tau(name);
    const auto& sim = cache.get(name, tau);
    const DissipationReport rep = dissipation_check(sim.record);
    worst = std::min(worst, rep.worst_margin);
    o.fail_if(!rep.passed, name + " violates the minimizer inequality");
    o.fail_if(sim.record.aborted, name + " stalled");
    const double secs = cache.seconds(name, tau);
    o.fail_if(secs > 120.0, name + " took " + sci(secs) + " s");
  }
  if (o.passed) o.detail << "worst margin " << sci(worst);
  return o;
}

// 2
Outcome check_w2_sum(RunCache& cache) {
  Outcome o;
  double worst = 0.0;
  for (const auto& name : transport_presets()) {
    if (parse_mode(preset(name).at("mode").get<std::string>()) != SchemeMode::kJkoOnly) continue;
    for (double tau : kTauLevels) {
      const W2SumReport rep = w2_sum_check(cache.get(name, tau).record);
      for (const auto& r : rep.rows) worst = std::max(worst, r.cumulative / r.bound);
      o.fail_if(!rep.passed, name + " at tau " + sci(tau));
    }
  }
  if (o.passed) o.detail << "max cumulative/bound " << sci(worst);
  return o;
}

// 3
Outcome check_mass(RunCache& cache) {
  Outcome o;
  double transport = 0.0, reaction = 0.0;
  for (const auto& name : transport_presets()) {
    for (double tau : kTauLevels) {
      const auto& rec = cache.get(name, tau).record;
      for (const auto& log : rec.log) {
        transport = std::max(transport, std::abs(log.mass_after_transport - log.mass_before) / log.mass_before);
        if (log.has_reaction) {
          reaction = std::max(reaction, log.mass_after_reaction / log.mass_after_transport /
                                            std::exp(rec.spec.k_m * tau));
        }
      }
    }
  }
  double fv = 0.0;
  for (const auto& name : preset_names()) {
    if (!is_fv(name)) continue;
    const auto& rec = cache.get(name, cache.preset_tau(name)).record;
    if (rec.spec.k_m != 0.0 || rec.log.empty()) continue;
    fv = std::max(fv, std::abs(rec.log.back().mass_after_reaction - rec.log.front().mass_before) /
                          rec.log.front().mass_before);
  }
  o.fail_if(transport > 1e-12, "transport drift " + sci(transport));
  o.fail_if(reaction > 1.0 + 1e-12, "reaction growth factor / exp(k_M tau) " + sci(reaction));
  o.fail_if(fv > 1e-12, "fv drift " + sci(fv));
  if (o.passed) {
    o.detail << "transport drift " << sci(transport) << ", reaction factor ratio "
             << sci(reaction) << ", fv drift " << sci(fv);
  }
  return o;
}

// 4
Outcome check_gronwall(RunCache& cache, unsigned seed) {
  Outcome o;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto uni = [&](double a, double b) { return a + (b - a) * u01(rng); };
  double worst = 0.0;
  const GridPtr grid = make_grid(4.0, 256);
  for (int trial = 0; trial < 50; ++trial) {
    ModelSpec spec;
    spec.gamma = uni(1.2, 3.0);
    spec.k_m = uni(0.1, 3.0);
    const double tau = std::array{1e-3, 1e-2, 5e-2}[trial % 3];
    const int bumps = 1 + trial % 4;
    std::vector<std::array<double, 3>> b;
    for (int k = 0; k < bumps; ++k) b.push_back({uni(-2.0, 2.0), uni(0.3, 1.2), uni(0.1, 1.5)});
    const GridDensity before = GridDensity::cell_average(grid, [&b](double x) {
      double r = 0.0;
      for (const auto& [c, w, a] : b) {
        const double v = (x - c) / w;
        if (std::abs(v) < 1.0) r += a * std::pow(std::cos(0.5 * std::numbers::pi * v), 2);
      }
      return r;
    });
    const GridDensity after = reaction_step(before, tau, spec);
    const GronwallReport g = gronwall_check(before, after, tau, spec.gamma, spec);
    worst = std::max({worst, g.ratio_lgamma / g.bound, g.ratio_m2 / g.bound, g.ratio_h1 / g.bound});
    o.fail_if(!g.passed(), "random profile " + std::to_string(trial));
  }
  int steps = 0;
  for (const auto& name : transport_presets()) {
    const auto& rec = cache.get(name, cache.preset_tau(name)).record;
    for (const auto& log : rec.log) {
      if (!log.has_reaction) continue;
      ++steps;
      const auto& g = log.gronwall;
      worst = std::max({worst, g.ratio_lgamma / g.bound, g.ratio_m2 / g.bound, g.ratio_h1 / g.bound});
      o.fail_if(!g.passed(), name + " step " + std::to_string(log.step));
    }
  }
  if (o.passed) o.detail << "50 profiles + " << steps << " preset steps, max ratio/bound " << sci(worst);
  return o;
}

// 5
Outcome check_oracle(RunCache& cache) {
  Outcome o;
  const auto start = Clock::now();

  const RunConfig bb = cache.config("barenblatt", 1e-3);
  const auto& jko = cache.get("barenblatt", 1e-3);
  const Barenblatt exact(bb.initial.mass);
  const double t_end = bb.initial.t0 + bb.horizon;
  const double jko_err =
      l1_distance(jko.record.snapshots.back().rho, exact.density(jko.grid, t_end)) / bb.initial.mass;
  o.fail_if(jko_err > 0.02, "JKO vs Barenblatt " + sci(jko_err));

  RunConfig fine = bb;
  fine.cells = 2048;
  fine.mode = SchemeMode::kFiniteVolume;
  fine.tau = 0.05;
  const Simulation fv = simulate(fine);
  const double fv_err =
      l1_distance(fv.record.snapshots.back().rho, exact.density(fv.grid, t_end)) / bb.initial.mass;
  o.fail_if(fv_err > 0.01, "FV vs Barenblatt " + sci(fv_err));

  RunConfig agg = cache.config("aggregation", 1e-3);
  const auto& jko_agg = cache.get("aggregation", 1e-3);
  agg.cells = 2048;
  agg.mode = SchemeMode::kFiniteVolume;
  agg.tau = 0.1;
  const Simulation fv_agg = simulate(agg);
  const double m = mass(jko_agg.rho0);
  const OracleReport rep =
      compare_to_oracle(jko_agg.record, fv_agg.record, {0.1, 0.2, 0.3, 0.4, 0.5}, 0.05 * m);
  o.fail_if(!rep.within_budget, "JKO vs FV aggregation " + sci(rep.max_l1 / m));

  // reported next to the cross distance; not gated
  std::vector<const TrajectoryRecord*> levels;
  for (double tau : kTauLevels) levels.push_back(&cache.get("aggregation", tau).record);
  const SelfConvergenceReport sc = self_convergence(levels);

  const double secs = seconds_since(start);
  o.fail_if(secs > 600.0, "took " + sci(secs) + " s");
  if (o.passed) {
    o.detail << "JKO/Barenblatt " << sci(jko_err) << ", FV/Barenblatt " << sci(fv_err)
             << ", JKO/FV aggregation " << sci(rep.max_l1 / m);
    if (!sc.rates.empty()) o.detail << " (JKO self-convergence rate " << std::fixed << std::setprecision(2) << sc.rates.front() << std::defaultfloat << ")";
  }
  return o;
}

// 6
Outcome check_constraint(RunCache& cache) {
  Outcome o;
  double clean_worst = 0.0;
  for (const auto& name : preset_names()) {
    if (preset(name).value("beta_zero", false)) continue;
    const double r = constraint_residual(cache.get(name, cache.preset_tau(name)).record);
    clean_worst = std::max(clean_worst, r);
    o.fail_if(r > 1e-9, name + " residual " + sci(r));
  }
  const double clean = constraint_residual(cache.get("splitting", cache.preset_tau("splitting")).record);
  const double fault =
      constraint_residual(cache.get("fault-beta-zero", cache.preset_tau("fault-beta-zero")).record);
  o.fail_if(!(fault > 0.0) || fault < 1e3 * clean,
            "fault residual " + sci(fault) + " vs clean " + sci(clean));
  if (o.passed) o.detail << "clean max " << sci(clean_worst) << ", fault " << sci(fault);
  return o;
}

// slope of log r against log tau by least squares
double fitted_exponent(const std::vector<double>& taus, const std::vector<double>& r) {
  const int n = static_cast<int>(taus.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = std::log(taus[i]), y = std::log(r[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// 7
Outcome check_weak_form(RunCache& cache) {
  Outcome o;
  const std::vector<double> taus(std::begin(kTauLevels), std::end(kTauLevels));
  for (const auto& name : preset_names()) {
    std::vector<double> r;
    for (double tau : taus) {
      const auto& sim = cache.get(name, tau);
      r.push_back(weak_form_residual(sim.record, phi_battery(), 0.0, sim.record.horizon,
                                     BesselKernel1D{cache.kernel_scale()}));
    }
    const double p = fitted_exponent(taus, r);
    const bool monotone = r[1] < r[0] && r[2] < r[1];
    o.fail_if(!monotone, name + " not monotone (" + sci(r[0]) + ", " + sci(r[1]) + ", " + sci(r[2]) + ")");
    o.fail_if(p < 0.4, name + " exponent " + sci(p));
    o.detail << (o.detail.tellp() > 0 ? ", " : "") << name << " p=" << std::fixed
             << std::setprecision(2) << p << std::defaultfloat;
  }
  return o;
}

// 8
Outcome check_regularity(RunCache& cache) {
  Outcome o;
  double worst = 1.0;
  for (const auto& name : preset_names()) {
    std::vector<RegularityReport> levels;
    for (double tau : kTauLevels) {
      const auto& sim = cache.get(name, tau);
      levels.push_back(regularity_check(sim.record, sim.spec.gamma));
    }
    const RegularityComparison cmp = compare_regularity(levels, 1.5);
    worst = std::max(worst, cmp.max_ratio);
    o.fail_if(!cmp.uniform, name + " H1 integral ratio " + sci(cmp.max_ratio));
    o.fail_if(!cmp.entropy_bounded, name + " entropy exceeds the linear bound");
  }
  if (o.passed) o.detail << "max H1 integral ratio " << sci(worst);
  return o;
}

// 9
Outcome check_gradient(unsigned seed) {
  Outcome o;
  std::mt19937 rng(seed + 9);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto uni = [&](double a, double b) { return a + (b - a) * u01(rng); };
  const GridPtr grid = make_grid(4.0, 512);
  const KernelTable tab(grid);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 40;
    std::vector<double> y(n);
    double x = uni(-2.5, -1.5);
    for (int k = 0; k < n; ++k) {
      x += uni(0.02, 0.12);
      y[k] = x;
    }
    const ParticleDensity prev(y, uni(0.005, 0.05));
    std::vector<double> xs(y);
    for (int k = 0; k < n; ++k) xs[k] += uni(-0.004, 0.004);
    std::sort(xs.begin(), xs.end());

    ModelSpec spec;
    spec.gamma = uni(1.5, 3.0);
    spec.chi = uni(0.0, 2.0);
    const double tau = uni(1e-3, 1e-2);
    std::vector<unsigned char> cells(grid->size(), 0);
    const int a = static_cast<int>(uni(100, 250)), b = static_cast<int>(uni(260, 400));
    for (int i = a; i < b; ++i) cells[i] = 1;
    const SupportIndicator beta{grid, cells};

    const std::vector<double> g = jko_gradient(xs, prev, beta, tau, spec, tab);
    double min_gap = std::numeric_limits<double>::infinity();
    for (int k = 0; k + 1 < n; ++k) min_gap = std::min(min_gap, xs[k + 1] - xs[k]);
    const double h = 1e-4 * min_gap;
    double gmax = 0.0, err = 0.0;
    for (int k = 0; k < n; ++k) {
      std::vector<double> p(xs), m(xs);
      p[k] += h;
      m[k] -= h;
      const double fd = (jko_objective(p, prev, beta, tau, spec, tab) -
                         jko_objective(m, prev, beta, tau, spec, tab)) / (2.0 * h);
      err = std::max(err, std::abs(fd - g[k]));
      gmax = std::max(gmax, std::abs(g[k]));
    }
    const double rel = err / gmax;
    worst = std::max(worst, rel);
    o.fail_if(rel > 1e-4, "state " + std::to_string(trial) + " relative error " + sci(rel));
  }
  if (o.passed) o.detail << "max relative error " << sci(worst) << " over 20 states";
  return o;
}

// 10
Outcome check_kernel(double scale) {
  Outcome o;
  const BesselKernel1D k1{scale};
  for (double L : {4.0, 20.0}) {
    const double err = std::abs(k1.integral(-L, L) - 1.0);
    o.fail_if(err > std::exp(-L) + 1e-6, "1D mass with L = " + sci(L) + " off by " + sci(err));
    const KernelTable tab(make_grid(L, 1024), k1);
    const double derr = std::abs(tab.discrete_mass() - 1.0);
    o.fail_if(derr > std::exp(-L) + 1e-6, "discrete table mass off by " + sci(derr));
  }
  using boost::math::quadrature::gauss_kronrod;
  auto radial = [scale](double r) { return 2.0 * std::numbers::pi * r * scale * bessel_2d(r); };
  const double m2 = gauss_kronrod<double, 31>::integrate(radial, 0.0, 1.0, 15, 1e-12) +
                    gauss_kronrod<double, 31>::integrate(radial, 1.0, 60.0, 15, 1e-12);
  o.fail_if(std::abs(m2 - 1.0) > 1e-4, "2D radial mass " + sci(m2));
  const double r0 = 1e-3;
  const double small = scale * bessel_2d(r0) / (-std::log(r0) / (2.0 * std::numbers::pi));
  o.fail_if(std::abs(small - 1.0) > 0.1, "small-r ratio " + sci(small));
  const double r1 = 10.0;
  const double large = scale * bessel_2d(r1) /
                       (std::exp(-r1) / std::sqrt(r1) / (2.0 * std::sqrt(2.0 * std::numbers::pi)));
  o.fail_if(std::abs(large - 1.0) > 0.02, "large-r ratio " + sci(large));
  if (o.passed) {
    o.detail << "2D mass " << std::setprecision(8) << m2 << std::defaultfloat << ", small-r ratio "
             << sci(small) << ", large-r ratio " << sci(large);
  }
  return o;
}

// 11
Outcome check_holder(RunCache& cache) {
  Outcome o;
  double worst = 1.0;
  for (const auto& name : preset_names()) {
    const double c0 = holder_constant(cache.get(name, 2e-3).record, 4e-3).constant;
    const double c1 = holder_constant(cache.get(name, 1e-3).record, 4e-3).constant;
    const double drift = std::max(c0, c1) / std::min(c0, c1);
    worst = std::max(worst, drift);
    o.fail_if(!(drift <= 2.0), name + " constant " + sci(c0) + " -> " + sci(c1));
  }
  if (o.passed) o.detail << "max drift " << sci(worst);
  return o;
}

}  // namespace

const std::vector<std::string>& criterion_names() {
  static const std::vector<std::string> names = {
      "dissipation", "w2-sum",     "mass",       "gronwall", "oracle", "constraint",
      "weak-form",   "regularity", "gradient",   "kernel",   "holder"};
  return names;
}

std::vector<CriterionResult> run_validation(const ValidationOptions& opts) {
  const auto& names = criterion_names();
  for (const auto& n : opts.only) {
    if (std::find(names.begin(), names.end(), n) == names.end()) {
      throw InvalidArgument("unknown check \"" + n + "\"");
    }
  }
  RunCache cache(opts.kernel_scale);
  std::vector<CriterionResult> results;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const std::string& name = names[i];
    if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), name) == opts.only.end()) {
      continue;
    }
    CriterionResult r;
    r.id = static_cast<int>(i) + 1;
    r.name = name;
    const auto start = Clock::now();
    try {
      Outcome o;
      switch (r.id) {
        case 1: o = check_dissipation(cache); break;
        case 2: o = check_w2_sum(cache); break;
        case 3: o = check_mass(cache); break;
        case 4: o = check_gronwall(cache, opts.seed); break;
        case 5: o = check_oracle(cache); break;
        case 6: o = check_constraint(cache); break;
        case 7: o = check_weak_form(cache); break;
        case 8: o = check_regularity(cache); break;
        case 9: o = check_gradient(opts.seed); break;
        case 10: o = check_kernel(opts.kernel_scale); break;
        case 11: o = check_holder(cache); break;
      }
      r.passed = o.passed;
      r.detail = o.detail.str();
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = seconds_since(start);
    if (opts.on_result) opts.on_result(r);
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_result(const CriterionResult& r) {
  char head[64];
  std::snprintf(head, sizeof head, "[%s] %2d %-11s (%.1fs) ", r.passed ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.seconds);
  return head + r.detail;
}

nlohmann::json to_json(const std::vector<CriterionResult>& results) {
  nlohmann::json arr = nlohmann::json::array();
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    arr.push_back({{"id", r.id},
                   {"name", r.name},
                   {"verdict", r.passed ? "pass" : "fail"},
                   {"detail", r.detail},
                   {"seconds", r.seconds}});
  }
  return {{"schema_version", kSummarySchemaVersion}, {"passed", all}, {"criteria", arr}};
}

}  // namespace jkoflow

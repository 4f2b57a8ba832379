#include "jkoflow/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <optional>

#include "jkoflow/diagnostics.hpp"
#include "jkoflow/errors.hpp"
#include "jkoflow/metrics.hpp"
#include "jkoflow/oracle.hpp"

namespace jkoflow {

namespace fs = std::filesystem;
using nlohmann::json;

std::string library_version() {
#ifdef JKOFLOW_VERSION
  return JKOFLOW_VERSION;
#else
  return "unknown";
#endif
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool is_barenblatt_case(const RunConfig& cfg) {
  return cfg.initial.type == "barenblatt" && cfg.model.chi == 0.0 && cfg.model.k_m == 0.0 &&
         cfg.model.gamma == 2.0;
}

void write_snapshot(const fs::path& path, const Snapshot& snap, const KernelTable& tab) {
  const Grid& g = snap.rho.grid();
  std::vector<double> src(g.size());
  for (int i = 0; i < g.size(); ++i) src[i] = snap.rho[i] + snap.beta.cells[i];
  const ScalarField c = convolve(src, tab);
  std::ofstream out(path);
  out << "x,rho,beta,c\n";
  for (int i = 0; i < g.size(); ++i) {
    out << fmt(g.center(i)) << ',' << fmt(snap.rho[i]) << ',' << int(snap.beta.cells[i]) << ','
        << fmt(c.values[i]) << '\n';
  }
}

void write_diagnostics(const fs::path& path, const Simulation& sim, const KernelTable& tab) {
  const TrajectoryRecord& rec = sim.record;
  std::ofstream out(path);
  out << "step,time,mass,m2,entropy,A,K,S,w2_step,dissipation_slack,gronwall_lgamma,gronwall_m2,"
         "gronwall_h1\n";
  const DissipationReport diss = dissipation_check(rec);
  std::size_t drow = 0;
  auto grid_cols = [&](int step) {
    if (!rec.has_step(step)) return std::string(",,,,,");
    const Snapshot& snap = rec.at_step(step);
    // S[rho^n | rho^{n-1}] uses the support carried into step n
    const Snapshot& prev = step > 0 && rec.has_step(step - 1) ? rec.at_step(step - 1) : snap;
    const EnergyParts e = energy_parts(snap.rho, prev.beta, tab, rec.spec);
    return fmt(mass(snap.rho)) + ',' + fmt(second_moment(snap.rho)) + ',' + fmt(entropy(snap.rho)) +
           ',' + fmt(e.internal) + ',' + fmt(e.interaction) + ',' + fmt(e.support);
  };
  out << "0," << fmt(0.0) << ',' << grid_cols(0) << ",,,,,\n";
  for (const StepLog& log : rec.log) {
    out << log.step << ',' << fmt(log.time) << ',' << grid_cols(log.step) << ',';
    if (log.has_transport) {
      out << fmt(log.jko.w2_moved) << ',';
      if (drow < diss.rows.size() && diss.rows[drow].step == log.step) {
        out << fmt(diss.rows[drow++].margin());
      }
    } else {
      out << ',';
    }
    out << ',';
    if (log.has_reaction) {
      out << fmt(log.gronwall.ratio_lgamma) << ',' << fmt(log.gronwall.ratio_m2) << ','
          << fmt(log.gronwall.ratio_h1);
    } else {
      out << ",,";
    }
    out << '\n';
  }
}

json verdicts_json(const std::vector<CheckVerdict>& checks) {
  json arr = json::array();
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name},
                   {"verdict", c.passed ? "pass" : "fail"},
                   {"gating", c.gating},
                   {"value", c.value},
                   {"threshold", c.threshold},
                   {"detail", c.detail}});
  }
  return arr;
}

json versions_json() {
  return {{"jkoflow", library_version()},
          {"compiler", __VERSION__},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
          {"test_battery", kBatteryVersion}};
}

}  // namespace

fs::path resolve_output_dir(const RunConfig& cfg) {
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return fs::path(env);
  return fs::path(cfg.output_dir);
}

Simulation simulate(const RunConfig& cfg) {
  validate_config(cfg);
  GridPtr grid = config_grid(cfg);
  GridDensity rho0 = initial_density(cfg, grid);
  const ModelSpec spec = resolved_model(cfg, rho0);
  const KernelTable tab(grid, BesselKernel1D{cfg.kernel_scale});
  TrajectoryRecord rec;
  switch (cfg.mode) {
    case SchemeMode::kSplitting:
      rec = run_splitting(rho0, spec, cfg.tau, cfg.horizon, cfg.driver, tab);
      break;
    case SchemeMode::kJkoOnly:
      rec = run_jko_only(rho0, spec, cfg.tau, cfg.horizon, cfg.driver, tab);
      break;
    case SchemeMode::kFiniteVolume: {
      FvConfig fv;
      fv.dt = cfg.fv_dt;
      fv.horizon = cfg.horizon;
      fv.record_interval = cfg.tau;
      fv.adaptive = cfg.fv_adaptive;
      rec = fv_run(rho0, spec, fv, tab);
      break;
    }
  }
  return {grid, spec, std::move(rho0), std::move(rec)};
}

std::vector<CheckVerdict> run_checks(const RunConfig& cfg, const Simulation& sim) {
  const TrajectoryRecord& rec = sim.record;
  std::vector<CheckVerdict> out;
  const bool transport = rec.mode != SchemeMode::kFiniteVolume;

  if (transport) {
    const DissipationReport d = dissipation_check(rec);
    out.push_back({"dissipation", d.passed, true, d.worst_margin, 0.0,
                   "worst margin of F[prev|prev] - F[new|prev] + slack - W2^2/(2 tau)"});
  }
  if (rec.mode == SchemeMode::kJkoOnly) {
    const W2SumReport w = w2_sum_check(rec);
    double worst = 0.0;
    for (const auto& r : w.rows) worst = std::max(worst, r.bound > 0.0 ? r.cumulative / r.bound : 0.0);
    out.push_back({"w2_sum", w.passed, true, worst, 1.0,
                   "max cumulative / bound, C = " + fmt(w.c)});
  }

  double transport_drift = 0.0, reaction_excess = 0.0;
  for (const auto& log : rec.log) {
    if (log.has_transport && log.mass_before > 0.0) {
      transport_drift = std::max(
          transport_drift, std::abs(log.mass_after_transport - log.mass_before) / log.mass_before);
    }
    if (log.has_reaction && log.mass_after_transport > 0.0) {
      const double growth = log.mass_after_reaction / log.mass_after_transport;
      reaction_excess = std::max(reaction_excess, growth / std::exp(rec.spec.k_m * rec.tau));
    }
  }
  if (transport) {
    out.push_back({"mass_transport", transport_drift <= 1e-12, true, transport_drift, 1e-12,
                   "max relative mass change over a transport step"});
  } else if (rec.spec.k_m == 0.0 && !rec.log.empty()) {
    const double m0 = rec.log.front().mass_before;
    const double drift = std::abs(rec.log.back().mass_after_reaction - m0) / m0;
    out.push_back({"mass_fv", drift <= 1e-12, true, drift, 1e-12, "relative mass drift"});
  }
  if (rec.mode == SchemeMode::kSplitting && rec.spec.k_m > 0.0) {
    out.push_back({"mass_reaction", reaction_excess <= 1.0 + 1e-12, true, reaction_excess, 1.0,
                   "max reaction growth factor over exp(k_M tau)"});
    double worst = 0.0;
    bool ok = true;
    for (const auto& log : rec.log) {
      if (!log.has_reaction) continue;
      const auto& g = log.gronwall;
      worst = std::max({worst, g.ratio_lgamma / g.bound, g.ratio_m2 / g.bound, g.ratio_h1 / g.bound});
      ok = ok && g.passed();
    }
    out.push_back({"gronwall", ok, true, worst, 1.0, "max ratio / exp(gamma k_M tau)(1 + 10 dx)"});
  }

  const double constraint = constraint_residual(rec);
  out.push_back({"constraint", constraint <= 1e-9, !cfg.beta_zero, constraint, 1e-9,
                 cfg.beta_zero ? "fault injection: beta held at 0, verdict recorded only"
                               : "max over psi of |tau sum h(rho)(1 - beta) psi|"});

  if (rec.last_step() > 0 && rec.snapshot_stride == 1) {
    const double t_end = rec.last_step() * rec.tau;
    const double weak = weak_form_residual(rec, phi_battery(), 0.0, t_end, BesselKernel1D{cfg.kernel_scale});
    out.push_back({"weak_form", true, false, weak, 0.0, "residual on [0, T], reported only"});
  }

  if (is_barenblatt_case(cfg) && rec.last_step() == rec.steps && rec.steps > 0) {
    const Barenblatt b(cfg.initial.mass);
    const GridDensity exact = b.density(sim.grid, cfg.initial.t0 + cfg.horizon);
    const double err = l1_distance(rec.snapshots.back().rho, exact) / cfg.initial.mass;
    out.push_back({"barenblatt_l1", err <= 0.02, true, err, 0.02,
                   "relative L1 error against the closed form at T"});
  }
  return out;
}

namespace {

RunOutcome execute(const RunConfig& cfg, const fs::path& dir) {
  RunOutcome res;
  res.output_dir = dir;
  fs::create_directories(res.output_dir / "snapshots");
  const auto start = std::chrono::steady_clock::now();

  json summary = {{"schema_version", kSummarySchemaVersion},
                  {"config", to_json(cfg)},
                  {"versions", versions_json()}};
  std::optional<Simulation> result;
  try {
    result.emplace(simulate(cfg));
  } catch (const std::exception& e) {
    summary["status"] = "solver_failure";
    summary["error"] = e.what();
    summary["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ofstream(res.output_dir / "summary.json") << summary.dump(2) << '\n';
    res.exit_code = kExitStall;
    res.summary = std::move(summary);
    return res;
  }
  const Simulation& sim = *result;

  const KernelTable tab(sim.grid, BesselKernel1D{cfg.kernel_scale});
  write_diagnostics(res.output_dir / "diagnostics.csv", sim, tab);
  for (const auto& snap : sim.record.snapshots) {
    write_snapshot(res.output_dir / "snapshots" / ("step_" + std::to_string(snap.step) + ".csv"),
                   snap, tab);
  }

  const auto checks = run_checks(cfg, sim);
  bool ok = true;
  for (const auto& c : checks) ok = ok && (c.passed || !c.gating);

  summary["theta_supp_resolved"] = sim.spec.theta_supp;
  summary["steps"] = sim.record.steps;
  summary["last_step"] = sim.record.last_step();
  summary["checks"] = verdicts_json(checks);
  int iterations = 0;
  for (const auto& log : sim.record.log) iterations += log.jko.iterations;
  summary["transport_iterations"] = iterations;
  if (sim.record.aborted) {
    summary["status"] = "stalled";
    summary["error"] = sim.record.abort_reason;
    res.exit_code = kExitStall;
  } else {
    summary["status"] = ok ? "ok" : "check_failed";
    res.exit_code = ok ? kExitOk : kExitCheckFailed;
  }
  summary["wall_clock_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ofstream(res.output_dir / "summary.json") << summary.dump(2) << '\n';
  res.summary = std::move(summary);
  return res;
}

}  // namespace

RunOutcome run(const RunConfig& cfg) { return execute(cfg, resolve_output_dir(cfg)); }

RunOutcome compare(const RunConfig& a, const RunConfig& b, const fs::path& out_dir,
                   double budget_rel) {
  if (a.horizon != b.horizon) throw ConfigError("compare: both configs need the same T");
  const Simulation sa = simulate(a);
  const Simulation sb = simulate(b);
  RunOutcome res;
  res.output_dir = out_dir;
  fs::create_directories(out_dir);
  if (sa.record.aborted || sb.record.aborted) {
    res.exit_code = kExitStall;
    res.summary = {{"schema_version", kSummarySchemaVersion}, {"status", "stalled"}};
    std::ofstream(out_dir / "compare.json") << res.summary.dump(2) << '\n';
    return res;
  }
  const double dt = std::max(a.tau, b.tau);
  const double fine = std::min(a.tau, b.tau);
  if (std::abs(dt / fine - std::round(dt / fine)) > 1e-9 * (dt / fine)) {
    throw ConfigError("compare: the larger tau must be a multiple of the smaller one");
  }
  std::vector<double> times;
  const int n = step_count(dt, a.horizon);
  const int stride = std::max(1, n / 50);
  for (int k = stride; k <= n; k += stride) times.push_back(k * dt);
  const double m = mass(sa.rho0);
  const OracleReport rep = compare_to_oracle(sa.record, sb.record, times, budget_rel * m);

  std::ofstream csv(out_dir / "compare.csv");
  csv << "time,l1,l1_rel,w2,dbl_upper\n";
  json rows = json::array();
  for (const auto& r : rep.rows) {
    csv << fmt(r.time) << ',' << fmt(r.l1) << ',' << fmt(r.l1 / m) << ',' << fmt(r.w2) << ','
        << fmt(r.dbl_upper) << '\n';
    rows.push_back({{"time", r.time}, {"l1", r.l1}, {"w2", r.w2}, {"dbl_upper", r.dbl_upper},
                    {"within_budget", r.within_budget}});
  }
  res.summary = {{"schema_version", kSummarySchemaVersion},
                 {"config_a", to_json(a)},
                 {"config_b", to_json(b)},
                 {"budget_rel", budget_rel},
                 {"max_l1_rel", m > 0.0 ? rep.max_l1 / m : 0.0},
                 {"within_budget", rep.within_budget},
                 {"rows", rows},
                 {"versions", versions_json()}};
  std::ofstream(out_dir / "compare.json") << res.summary.dump(2) << '\n';
  res.exit_code = rep.within_budget ? kExitOk : kExitCheckFailed;
  return res;
}

RunOutcome sweep(const json& base, const std::string& key, const std::vector<std::string>& values,
                 const fs::path& out_dir) {
  if (values.empty()) throw ConfigError("sweep: no values given");
  std::vector<RunConfig> variants;
  std::vector<fs::path> dirs;
  for (const auto& v : values) {
    json doc = base;
    json parsed = json::parse(v, nullptr, false);
    doc[key] = parsed.is_discarded() ? json(v) : parsed;
    const fs::path dir = out_dir / (key + "=" + v);
    doc["output_dir"] = dir.string();
    variants.push_back(parse_config(doc));
    dirs.push_back(dir);
  }

  std::vector<std::future<RunOutcome>> jobs;
  for (std::size_t i = 0; i < variants.size(); ++i) {
    const RunConfig& c = variants[i];
    jobs.push_back(std::async(std::launch::async, [c, dir = dirs[i]] { return execute(c, dir); }));
  }

  RunOutcome res;
  res.output_dir = out_dir;
  fs::create_directories(out_dir);
  std::ofstream csv(out_dir / "sweep.csv");
  csv << key << ",exit_code,status,output_dir\n";
  json runs = json::array();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    RunOutcome r = jobs[i].get();
    csv << values[i] << ',' << r.exit_code << ',' << r.summary.value("status", "") << ','
        << dirs[i].string() << '\n';
    runs.push_back({{"value", values[i]}, {"exit_code", r.exit_code}, {"output_dir", dirs[i].string()}});
    res.exit_code = std::max(res.exit_code, r.exit_code);
  }
  res.summary = {{"schema_version", kSummarySchemaVersion}, {"param", key}, {"runs", runs}};
  return res;
}

}  // namespace jkoflow

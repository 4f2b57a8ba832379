#include "jkoflow/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "jkoflow/errors.hpp"

namespace jkoflow {

using nlohmann::json;

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "gamma",         "chi",          "k_m",           "k_h",
      "theta_supp",    "theta_supp_rel", "phi",         "L",
      "n",             "mode",         "tau",           "T",
      "particles",     "grad_tol_rel", "max_iterations", "carry_particles",
      "continue_on_stall", "snapshot_stride", "fv_dt",  "fv_adaptive",
      "initial",       "beta_zero",    "kernel_scale",  "output_dir",
      "seed"};
  return keys;
}

const std::vector<std::string>& initial_keys() {
  static const std::vector<std::string> keys = {"type",      "mass",       "t0",
                                                "centers",   "half_width", "amplitude",
                                                "left",      "right",      "height"};
  return keys;
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

namespace {

std::string nearest(const std::string& key, const std::vector<std::string>& known) {
  std::string best;
  std::size_t best_d = std::numeric_limits<std::size_t>::max();
  for (const auto& k : known) {
    const std::size_t d = edit_distance(key, k);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best_d <= std::max<std::size_t>(2, key.size() / 3) ? best : std::string();
}

void reject_unknown(const json& obj, const std::vector<std::string>& known, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(known.begin(), known.end(), key) != known.end()) continue;
    std::string msg = "unknown key \"" + where + key + "\"";
    const std::string hint = nearest(key, known);
    if (!hint.empty()) msg += "; did you mean \"" + where + hint + "\"?";
    throw ConfigError(msg);
  }
}

double get_number(const json& obj, const char* key, double fallback, const std::string& where = "") {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + key + " must be a number");
  return v.get<double>();
}

int get_int(const json& obj, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(std::string(key) + " must be an integer");
  return v.get<int>();
}

bool get_bool(const json& obj, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean()) throw ConfigError(std::string(key) + " must be true or false");
  return v.get<bool>();
}

std::string get_string(const json& obj, const char* key, const std::string& fallback,
                       const std::string& where = "") {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(where + key + " must be a string");
  return v.get<std::string>();
}

void require(bool ok, const std::string& rule) {
  if (!ok) throw ConfigError(rule);
}

std::string num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

InitialCondition parse_initial(const json& obj) {
  if (!obj.is_object()) throw ConfigError("initial must be an object");
  reject_unknown(obj, initial_keys(), "initial.");
  InitialCondition ic;
  ic.type = get_string(obj, "type", ic.type, "initial.");
  ic.mass = get_number(obj, "mass", ic.mass, "initial.");
  ic.t0 = get_number(obj, "t0", ic.t0, "initial.");
  if (obj.contains("centers")) {
    const json& c = obj.at("centers");
    if (!c.is_array()) throw ConfigError("initial.centers must be an array of numbers");
    ic.centers.clear();
    for (const auto& v : c) {
      if (!v.is_number()) throw ConfigError("initial.centers must be an array of numbers");
      ic.centers.push_back(v.get<double>());
    }
  }
  ic.half_width = get_number(obj, "half_width", ic.half_width, "initial.");
  ic.amplitude = get_number(obj, "amplitude", ic.amplitude, "initial.");
  ic.left = get_number(obj, "left", ic.left, "initial.");
  ic.right = get_number(obj, "right", ic.right, "initial.");
  ic.height = get_number(obj, "height", ic.height, "initial.");
  return ic;
}

// Smallest interval holding the initial support.
std::pair<double, double> initial_extent(const InitialCondition& ic) {
  if (ic.type == "barenblatt") {
    const double r = Barenblatt(ic.mass).support_radius(ic.t0);
    return {-r, r};
  }
  if (ic.type == "bumps") {
    const auto [lo, hi] = std::minmax_element(ic.centers.begin(), ic.centers.end());
    return {*lo - ic.half_width, *hi + ic.half_width};
  }
  return {ic.left, ic.right};
}

}  // namespace

SchemeMode parse_mode(const std::string& s) {
  if (s == "splitting") return SchemeMode::kSplitting;
  if (s == "jko-only") return SchemeMode::kJkoOnly;
  if (s == "fv-oracle") return SchemeMode::kFiniteVolume;
  throw ConfigError("mode must be one of splitting, jko-only, fv-oracle (got \"" + s + "\")");
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(doc, config_keys(), "");
  RunConfig cfg;
  ModelSpec& m = cfg.model;
  m.gamma = get_number(doc, "gamma", m.gamma);
  m.chi = get_number(doc, "chi", m.chi);
  m.k_m = get_number(doc, "k_m", m.k_m);
  m.k_h = get_number(doc, "k_h", m.k_h);
  if (doc.contains("theta_supp") && !doc.at("theta_supp").is_null()) {
    m.theta_supp = get_number(doc, "theta_supp", 0.0);
    cfg.theta_supp_explicit = true;
  }
  cfg.theta_supp_rel = get_number(doc, "theta_supp_rel", cfg.theta_supp_rel);
  const std::string phi = get_string(doc, "phi", "power");
  require(phi == "power", "phi must be \"power\" (got \"" + phi + "\")");

  cfg.half_width = get_number(doc, "L", cfg.half_width);
  cfg.cells = get_int(doc, "n", cfg.cells);
  cfg.mode = parse_mode(get_string(doc, "mode", to_string(cfg.mode)));
  cfg.tau = get_number(doc, "tau", cfg.tau);
  cfg.horizon = get_number(doc, "T", cfg.horizon);

  JkoConfig& jko = cfg.driver.jko;
  jko.particles = get_int(doc, "particles", jko.particles);
  jko.grad_tol_rel = get_number(doc, "grad_tol_rel", jko.grad_tol_rel);
  jko.max_iterations = get_int(doc, "max_iterations", jko.max_iterations);
  cfg.driver.carry_particles = get_bool(doc, "carry_particles", cfg.driver.carry_particles);
  cfg.driver.continue_on_stall = get_bool(doc, "continue_on_stall", cfg.driver.continue_on_stall);
  cfg.driver.snapshot_stride = get_int(doc, "snapshot_stride", cfg.driver.snapshot_stride);

  cfg.fv_dt = get_number(doc, "fv_dt", cfg.fv_dt);
  cfg.fv_adaptive = get_bool(doc, "fv_adaptive", cfg.fv_adaptive);

  if (doc.contains("initial")) cfg.initial = parse_initial(doc.at("initial"));

  cfg.beta_zero = get_bool(doc, "beta_zero", cfg.beta_zero);
  cfg.driver.freeze_beta_zero = cfg.beta_zero;
  cfg.kernel_scale = get_number(doc, "kernel_scale", cfg.kernel_scale);
  cfg.output_dir = get_string(doc, "output_dir", cfg.output_dir);
  if (doc.contains("seed")) {
    const json& v = doc.at("seed");
    if (!v.is_number_unsigned()) throw ConfigError("seed must be a nonnegative integer");
    cfg.seed = v.get<unsigned>();
  }
  validate_config(cfg);
  return cfg;
}

RunConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed config " + path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

void validate_config(const RunConfig& cfg) {
  const ModelSpec& m = cfg.model;
  require(m.gamma > 1.0, "gamma must be > 1 (got " + num(m.gamma) + ")");
  require(m.chi >= 0.0, "chi must be >= 0 (got " + num(m.chi) + ")");
  require(m.k_m >= 0.0, "k_m must be >= 0 (got " + num(m.k_m) + ")");
  require(m.k_h > 0.0, "k_h must be > 0 (got " + num(m.k_h) + ")");
  require(m.theta_supp >= 0.0, "theta_supp must be >= 0 (got " + num(m.theta_supp) + ")");
  require(cfg.theta_supp_rel >= 0.0 && cfg.theta_supp_rel < 1.0,
          "theta_supp_rel must lie in [0, 1) (got " + num(cfg.theta_supp_rel) + ")");
  require(cfg.half_width > 0.0, "L must be > 0 (got " + num(cfg.half_width) + ")");
  require(cfg.cells >= 2, "n must be >= 2 (got " + std::to_string(cfg.cells) + ")");
  require(cfg.tau > 0.0, "tau must be > 0 (got " + num(cfg.tau) + ")");
  require(cfg.horizon >= 0.0, "T must be >= 0 (got " + num(cfg.horizon) + ")");
  try {
    step_count(cfg.tau, cfg.horizon);
  } catch (const InvalidArgument&) {
    throw ConfigError("tau must divide T (tau = " + num(cfg.tau) + ", T = " + num(cfg.horizon) + ")");
  }
  const JkoConfig& jko = cfg.driver.jko;
  require(jko.particles >= 2, "particles must be >= 2 (got " + std::to_string(jko.particles) + ")");
  require(jko.grad_tol_rel > 0.0 && jko.grad_tol_rel < 1.0,
          "grad_tol_rel must lie in (0, 1) (got " + num(jko.grad_tol_rel) + ")");
  require(jko.max_iterations >= 1,
          "max_iterations must be >= 1 (got " + std::to_string(jko.max_iterations) + ")");
  require(cfg.driver.snapshot_stride >= 1,
          "snapshot_stride must be >= 1 (got " + std::to_string(cfg.driver.snapshot_stride) + ")");
  require(cfg.fv_dt > 0.0, "fv_dt must be > 0 (got " + num(cfg.fv_dt) + ")");
  require(cfg.kernel_scale > 0.0, "kernel_scale must be > 0 (got " + num(cfg.kernel_scale) + ")");

  const InitialCondition& ic = cfg.initial;
  require(ic.type == "barenblatt" || ic.type == "bumps" || ic.type == "plateau",
          "initial.type must be one of barenblatt, bumps, plateau (got \"" + ic.type + "\")");
  if (ic.type == "barenblatt") {
    require(ic.mass > 0.0, "initial.mass must be > 0 (got " + num(ic.mass) + ")");
    require(ic.t0 > 0.0, "initial.t0 must be > 0 (got " + num(ic.t0) + ")");
  } else if (ic.type == "bumps") {
    require(!ic.centers.empty(), "initial.centers must not be empty");
    require(ic.half_width > 0.0, "initial.half_width must be > 0 (got " + num(ic.half_width) + ")");
    require(ic.amplitude >= 0.0, "initial.amplitude must be >= 0 (got " + num(ic.amplitude) + ")");
  } else {
    require(ic.left < ic.right, "initial.left must be < initial.right");
    require(ic.height >= 0.0, "initial.height must be >= 0 (got " + num(ic.height) + ")");
  }
  const auto [lo, hi] = initial_extent(ic);
  require(lo > -cfg.half_width && hi < cfg.half_width,
          "initial support [" + num(lo) + ", " + num(hi) + "] must lie inside (-L, L) with L = " +
              num(cfg.half_width));

  ModelSpec probe = m;
  try {
    validate_model(probe);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

json to_json(const RunConfig& cfg) {
  const ModelSpec& m = cfg.model;
  const InitialCondition& ic = cfg.initial;
  json init = {{"type", ic.type}};
  if (ic.type == "barenblatt") {
    init["mass"] = ic.mass;
    init["t0"] = ic.t0;
  } else if (ic.type == "bumps") {
    init["centers"] = ic.centers;
    init["half_width"] = ic.half_width;
    init["amplitude"] = ic.amplitude;
  } else {
    init["left"] = ic.left;
    init["right"] = ic.right;
    init["height"] = ic.height;
  }
  return json{
      {"gamma", m.gamma},
      {"chi", m.chi},
      {"k_m", m.k_m},
      {"k_h", m.k_h},
      {"theta_supp", cfg.theta_supp_explicit ? json(m.theta_supp) : json(nullptr)},
      {"theta_supp_rel", cfg.theta_supp_rel},
      {"phi", to_string(m.phi_family)},
      {"L", cfg.half_width},
      {"n", cfg.cells},
      {"mode", to_string(cfg.mode)},
      {"tau", cfg.tau},
      {"T", cfg.horizon},
      {"particles", cfg.driver.jko.particles},
      {"grad_tol_rel", cfg.driver.jko.grad_tol_rel},
      {"max_iterations", cfg.driver.jko.max_iterations},
      {"carry_particles", cfg.driver.carry_particles},
      {"continue_on_stall", cfg.driver.continue_on_stall},
      {"snapshot_stride", cfg.driver.snapshot_stride},
      {"fv_dt", cfg.fv_dt},
      {"fv_adaptive", cfg.fv_adaptive},
      {"initial", init},
      {"beta_zero", cfg.beta_zero},
      {"kernel_scale", cfg.kernel_scale},
      {"output_dir", cfg.output_dir},
      {"seed", cfg.seed},
  };
}

GridPtr config_grid(const RunConfig& cfg) { return make_grid(cfg.half_width, cfg.cells); }

GridDensity initial_density(const RunConfig& cfg, GridPtr grid) {
  const InitialCondition& ic = cfg.initial;
  if (ic.type == "barenblatt") return Barenblatt(ic.mass).density(std::move(grid), ic.t0);
  if (ic.type == "bumps") {
    const auto centers = ic.centers;
    const double w = ic.half_width, a = ic.amplitude;
    return GridDensity::cell_average(std::move(grid), [centers, w, a](double x) {
      double r = 0.0;
      for (double c : centers) {
        const double u = (x - c) / w;
        if (std::abs(u) < 1.0) {
          const double v = std::cos(0.5 * std::numbers::pi * u);
          r += a * v * v;
        }
      }
      return r;
    });
  }
  // plateau: exact overlap fractions
  std::vector<double> v(grid->size(), 0.0);
  for (int i = 0; i < grid->size(); ++i) {
    const double lo = std::max(grid->edge(i), ic.left);
    const double hi = std::min(grid->edge(i + 1), ic.right);
    if (hi > lo) v[i] = ic.height * (hi - lo) / grid->dx();
  }
  return GridDensity(std::move(grid), std::move(v));
}

ModelSpec resolved_model(const RunConfig& cfg, const GridDensity& rho0) {
  ModelSpec m = cfg.model;
  if (!cfg.theta_supp_explicit) m.theta_supp = cfg.theta_supp_rel * max_value(rho0);
  return m;
}

}  // namespace jkoflow

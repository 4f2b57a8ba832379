#include "jkoflow/presets.hpp"

#include "jkoflow/errors.hpp"

namespace jkoflow {

using nlohmann::json;

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"barenblatt", "aggregation", "splitting",
                                                 "fault-beta-zero", "fv-aggregation"};
  return names;
}

json preset(const std::string& name) {
  if (name == "barenblatt") {
    return {{"mode", "jko-only"}, {"gamma", 2.0},  {"chi", 0.0},         {"k_m", 0.0},
            {"L", 4.0},           {"n", 1024},     {"tau", 1e-3},        {"T", 0.5},
            {"particles", 400},   {"initial", {{"type", "barenblatt"}, {"mass", 1.0}, {"t0", 0.1}}},
            {"output_dir", "out/barenblatt"}};
  }
  if (name == "aggregation") {
    // 1600 particles keep the Lagrangian floor of the weak residual below its tau part
    return {{"mode", "jko-only"}, {"gamma", 2.0}, {"chi", 1.0},  {"k_m", 0.0},
            {"L", 4.0},           {"n", 1024},    {"tau", 1e-3}, {"T", 0.5},
            {"particles", 1600},
            {"initial",
             {{"type", "bumps"}, {"centers", {-1.0, 1.0}}, {"half_width", 0.8}, {"amplitude", 1.0}}},
            {"output_dir", "out/aggregation"}};
  }
  if (name == "splitting" || name == "fault-beta-zero") {
    json doc = {{"mode", "splitting"}, {"gamma", 2.0}, {"chi", 1.0},  {"k_m", 1.0},
                {"k_h", 1.0},          {"L", 4.0},     {"n", 1024},   {"tau", 1e-3},
                {"T", 0.5},            {"particles", 400},
                {"initial",
                 {{"type", "bumps"}, {"centers", {0.0}}, {"half_width", 1.0}, {"amplitude", 0.5}}},
                {"output_dir", "out/" + name}};
    if (name == "fault-beta-zero") doc["beta_zero"] = true;
    return doc;
  }
  if (name == "fv-aggregation") {
    return {{"mode", "fv-oracle"}, {"gamma", 2.0}, {"chi", 1.0},  {"k_m", 0.0},
            {"L", 4.0},            {"n", 1024},    {"tau", 1e-3}, {"T", 0.5},
            {"fv_dt", 1e-3},       {"fv_adaptive", true},
            {"initial",
             {{"type", "bumps"}, {"centers", {-1.0, 1.0}}, {"half_width", 0.8}, {"amplitude", 1.0}}},
            {"output_dir", "out/fv-aggregation"}};
  }
  throw InvalidArgument("unknown preset \"" + name + "\"");
}

}  // namespace jkoflow

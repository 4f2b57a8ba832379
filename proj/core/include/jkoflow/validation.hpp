#pragma once

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace jkoflow {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct ValidationOptions {
  /// Criterion names to run; empty runs all.
  std::vector<std::string> only;
  /// Fault injection: multiply K by this factor everywhere.
  double kernel_scale = 1.0;
  unsigned seed = 20240611;
  /// Called as each criterion finishes.
  std::function<void(const CriterionResult&)> on_result;
};

/// Names in criterion order: dissipation, w2-sum, mass, gronwall, oracle, constraint,
/// weak-form, regularity, gradient, kernel, holder.
const std::vector<std::string>& criterion_names();

/// Throws InvalidArgument on an unknown name in `only`.
std::vector<CriterionResult> run_validation(const ValidationOptions& opts);

std::string format_result(const CriterionResult& r);
nlohmann::json to_json(const std::vector<CriterionResult>& results);

}  // namespace jkoflow

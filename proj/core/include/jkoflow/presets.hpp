#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace jkoflow {

/// Shipped configurations, in validation order.
const std::vector<std::string>& preset_names();

/// Config document for a shipped preset; throws InvalidArgument for unknown names.
nlohmann::json preset(const std::string& name);

}  // namespace jkoflow

#pragma once

#include "biofilm/scenario.hpp"

#include <string>
#include <vector>

namespace biofilm {

/// Names of the built-in scenarios, in listing order.
const std::vector<std::string>& preset_names();

/// One-line summary of a preset.
std::string preset_description(const std::string& name);

/// Builds a preset. Throws ConfigError(UnknownPreset) listing valid names.
ScenarioConfig preset(const std::string& name);

}  // namespace biofilm

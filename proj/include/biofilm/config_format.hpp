#pragma once

#include "biofilm/scenario.hpp"

#include <string>
#include <string_view>

namespace biofilm {

// Scenario documents are line-oriented:
//
//   # comment
//   [model]
//   n = 2
//   [model.A]
//   row1 = 2, 0
//   row2 = 0, 1
//   [species.1]
//   b = 0
//   eta = 1
//   phi0_initial = 0.2
//   [forcing.nutrient]
//   kind = "constant"
//   value = 100
//
// Values are decimal numbers, quoted strings or comma-separated numbers.

/// Parses and validates a scenario document. Optional keys take their
/// defaults. Throws ConfigError with a line number for syntax errors and a
/// distinct code for each semantic violation.
ScenarioConfig parse_config(std::string_view text);

/// Reads and parses a file. I/O failures surface as ConfigError(InvalidValue).
ScenarioConfig load_config(const std::string& path);

/// Emits a document that parse_config() maps back to an identical config.
std::string serialize_config(const ScenarioConfig& config);

/// 17 significant digits, enough to round-trip every double.
std::string format_number(double value);

}  // namespace biofilm

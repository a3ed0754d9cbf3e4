#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace biofilm {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;  // a scenario or check failed
inline constexpr int exit_usage = 2;

/// Command-line entry point; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace biofilm

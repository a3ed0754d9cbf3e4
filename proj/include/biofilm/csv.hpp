#pragma once

#include "biofilm/solver.hpp"

#include <ostream>
#include <stdexcept>
#include <string>

namespace biofilm {

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Header row for an n-species trajectory.
std::string csv_header(int species_count);

/// Writes the header plus every stride-th point (step 0 always, the last
/// point always). Numbers use 17 significant digits.
void write_trajectory(const Trajectory& trajectory, long stride, std::ostream& out);

/// Same, to a file. Throws OutputError naming the path and the cause.
void write_trajectory(const Trajectory& trajectory, long stride, const std::string& path);

}  // namespace biofilm

#pragma once

#include "biofilm/scenario.hpp"
#include "biofilm/solver.hpp"

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace biofilm {

inline constexpr std::uint64_t default_seed = 20240917;

struct CheckReport {
  std::string name;
  bool passed = false;
  double worst_error = 0.0;
  std::string location;  // where the worst error occurred
  std::uint64_t seed = 0;
};

/// "PASS name  worst=...  at ..." for console output.
std::string summary_line(const CheckReport& report);
/// name,passed,worst_error,location,seed rows under a header.
void write_reports(const std::vector<CheckReport>& reports, const std::string& path);

// Finite-difference oracles. Errors are normwise: the largest deviation over
// a sample divided by the largest magnitude of the compared vector (per row
// for the Jacobian), with magnitudes below 1e-4 treated as 1e-4 so that an
// absolute deviation of 1e-10 always passes. Tolerance 1e-6, central step 1e-6.
inline constexpr double fd_step = 1e-6;
inline constexpr double fd_tolerance = 1e-6;

/// Stationary part of the residual (drive and barrier forces) against finite
/// differences of free energy plus barrier potentials.
CheckReport check_energy_gradient(const ModelParams& params, int sample_count,
                                  double nutrient = 100.0, double antibiotic = 10.0,
                                  std::uint64_t seed = default_seed);

/// Viscous part of the residual against finite differences of half the
/// dissipated power with respect to the rates.
CheckReport check_dissipation_gradient(const ModelParams& params, int sample_count,
                                       std::uint64_t seed = default_seed);

/// Analytic Jacobian against central differences of the residual at random
/// interior (next, previous, dt) triples with random forcing values.
CheckReport check_jacobian(const ModelParams& params, int sample_count,
                           std::uint64_t seed = default_seed);

/// Random admissible parameters for n species.
ModelParams random_params(int n, std::mt19937_64& rng);

/// Random scenario that the solver is expected to complete.
ScenarioConfig random_config(std::uint64_t seed);

/// Integrates the rate form of the evolution equations (constraint
/// differentiated once) with an adaptive implicit Gauss method, sub-steps capped at
/// dt / substep_factor, and samples it on the solver's output grid.
/// A singular rate matrix or a state leaving (0,1) ends the run with
/// Termination::Failure and the location in failure_message.
Trajectory reference_trajectory(const ScenarioConfig& config, int substep_factor);

/// Largest deviation of phi0, phi and phibar over the steps both share.
double trajectory_discrepancy(const Trajectory& a, const Trajectory& b);

struct ConvergenceStudy {
  std::vector<double> dts;
  std::vector<double> errors;  // against the reference at dt / substep_factor
  std::vector<double> orders;  // between consecutive dts
};

/// Runs `config` to its final time with each dt and measures the error.
ConvergenceStudy convergence_study(const ScenarioConfig& config, const std::vector<double>& dts,
                                   int substep_factor = 100);

// Trajectory properties. Each returns one report.
inline constexpr double constraint_tolerance = 1e-8;
inline constexpr double dissipation_floor = -1e-12;
inline constexpr double equivariance_tolerance = 1e-12;

/// Completion, constraint, strict bounds and non-negative step dissipation.
CheckReport check_trajectory_properties(const Trajectory& trajectory, const ScenarioConfig& config);
/// Two runs produce byte-identical CSV output.
CheckReport check_determinism(const ScenarioConfig& config);
/// Running the relabelled config reproduces the relabelled trajectory.
CheckReport check_permutation(const ScenarioConfig& config, const std::vector<int>& perm);

/// Qualitative claims about the preset scenarios, one report per claim.
std::vector<CheckReport> figure_checks();

/// Everything `verify` runs. Quick mode uses fewer samples and random configs.
std::vector<CheckReport> verification_suite(bool quick);

}  // namespace biofilm

#pragma once

#include "biofilm/forcing.hpp"
#include "biofilm/model.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace biofilm {

/// Distinct failure codes for configuration documents and presets.
enum class ConfigErrorCode {
  Syntax,
  MissingKey,
  InvalidValue,
  DimensionMismatch,
  AsymmetricGrowth,
  NonPositiveViscosity,
  InitialFractionSum,
  FractionOutOfRange,
  InvalidSolverSetting,
  UnknownPreset,
  UnknownKey,
};

std::string to_string(ConfigErrorCode code);

class ConfigError : public std::runtime_error {
 public:
  ConfigError(ConfigErrorCode code, const std::string& message, int line = 0);
  ConfigErrorCode code() const { return code_; }
  /// 1-based line of the offending input, 0 when not tied to a line.
  int line() const { return line_; }

 private:
  ConfigErrorCode code_;
  int line_;
};

struct SolverSettings {
  double residual_tolerance = 1e-10;  // on the row-scaled residual, infinity norm
  int max_newton_iterations = 50;
  int max_halvings = 10;
  double dt = 1e-4;
  long steps = 1500;
  double steady_state_tolerance = 0.0;  // 0 disables early stop
  int max_substep_depth = 8;            // recursive dt halving on a failed step

  /// Throws std::invalid_argument naming the offending setting.
  void validate() const;
  bool operator==(const SolverSettings&) const = default;
};

struct OutputOptions {
  std::string csv_path;
  long stride = 1;
  bool operator==(const OutputOptions&) const = default;
};

/// Everything needed to reproduce one simulation.
struct ScenarioConfig {
  std::string name;
  std::string description;
  ModelParams params;
  Vector initial_phi;
  Vector initial_psi;
  ForcingSignal nutrient;
  ForcingSignal antibiotic;
  SolverSettings solver;
  OutputOptions output;

  /// Throws ConfigError (see config_format.hpp) on violated invariants.
  void validate() const;
  bool operator==(const ScenarioConfig& other) const;
};

/// Relabels species: new species i is old species perm[i].
ScenarioConfig relabel_species(const ScenarioConfig& config, const std::vector<int>& perm);

/// A species order that depends only on what each species is (parameters,
/// interactions, initial data), never on its label.
std::vector<int> canonical_species_order(const ScenarioConfig& config);

}  // namespace biofilm

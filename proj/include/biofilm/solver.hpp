#pragma once

#include "biofilm/forcing.hpp"
#include "biofilm/model.hpp"
#include "biofilm/scenario.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace biofilm {

class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(long step_index, double best_norm);
  long step_index() const { return step_index_; }
  double best_norm() const { return best_norm_; }

 private:
  long step_index_;
  double best_norm_;
};

class SingularJacobian : public std::runtime_error {
 public:
  explicit SingularJacobian(long step_index);
  long step_index() const { return step_index_; }

 private:
  long step_index_;
};

struct StepDiagnostics {
  int newton_iterations = 0;
  double residual_norm = 0.0;  // scaled, see residual_scale()
  double dissipation = 0.0;    // dissipated power of the accepted step
  double constraint_violation = 0.0;
  int substeps = 1;
  bool operator==(const StepDiagnostics&) const = default;
};

struct StepResult {
  SimState state;
  StepDiagnostics diagnostics;
};

/// Advances `previous` by one backward Euler step of size dt. Forcing is read
/// at the new time level. If Newton fails, the step is retried as two half
/// steps, recursively up to settings.max_substep_depth.
///
/// Throws NonConvergence or SingularJacobian once the fallback is exhausted.
StepResult solve_step(const SimState& previous, double dt, const ModelParams& params,
                      const ForcingSignal& nutrient, const ForcingSignal& antibiotic,
                      long step_index, const SolverSettings& settings);

enum class Termination { Completed, SteadyState, Failure };
std::string to_string(Termination termination);

struct TrajectoryPoint {
  long step = 0;
  SimState state;
  StepDiagnostics diagnostics;
  double nutrient = 0.0;
  double antibiotic = 0.0;
};

struct Trajectory {
  std::string scenario;
  std::vector<TrajectoryPoint> points;
  Termination termination = Termination::Completed;
  long failure_step = -1;
  std::string failure_message;

  bool ok() const { return termination != Termination::Failure; }
  const SimState& final_state() const { return points.back().state; }
};

/// Integrates a scenario. Step failures end the run with
/// Termination::Failure; every state computed before the failure is kept.
Trajectory run(const ScenarioConfig& config);

}  // namespace biofilm

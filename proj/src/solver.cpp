#include "biofilm/solver.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace biofilm {

namespace {

std::string nonconvergence_message(long step, double norm) {
  std::ostringstream os;
  os << "Newton iteration did not converge at step " << step << " (best scaled residual " << norm
     << ")";
  return os.str();
}

std::string singular_message(long step) {
  std::ostringstream os;
  os << "singular Jacobian at step " << step;
  return os.str();
}

bool interior(const Vector& u) {
  // Every unknown except the trailing multiplier is a bounded fraction.
  for (Eigen::Index k = 0; k + 1 < u.size(); ++k) {
    if (!(u(k) > 0.0 && u(k) < 1.0)) return false;
  }
  return u.allFinite();
}

struct Evaluation {
  Vector residual;
  Vector scale;
  double norm;
};

Evaluation evaluate(const SimState& next, const SimState& previous, double dt,
                    const ModelParams& params, double c, double alpha) {
  const StepProblem problem{next, previous, dt, params, c, alpha};
  Evaluation e{residual(problem), residual_scale(problem), 0.0};
  e.norm = e.residual.cwiseQuotient(e.scale).cwiseAbs().maxCoeff();
  return e;
}

struct NewtonResult {
  SimState state;
  int iterations;
  double norm;
};

NewtonResult newton(const SimState& previous, double dt, const ModelParams& params, double c,
                    double alpha, long step_index, const SolverSettings& settings) {
  const double t_next = previous.t + dt;
  Vector u = pack(previous);
  SimState current = unpack(u, t_next);
  Evaluation eval = evaluate(current, previous, dt, params, c, alpha);

  for (int it = 0; it < settings.max_newton_iterations; ++it) {
    if (eval.norm <= settings.residual_tolerance) return {current, it, eval.norm};

    // Row scaling by the residual term magnitudes, column scaling by the
    // largest entry; the barrier curvature spans many decades otherwise.
    Matrix J = jacobian({current, previous, dt, params, c, alpha});
    J = eval.scale.cwiseInverse().asDiagonal() * J;
    const Vector columns = J.cwiseAbs().colwise().maxCoeff().transpose();
    if (!columns.allFinite() || (columns.array() == 0.0).any()) throw SingularJacobian(step_index);
    J = J * columns.cwiseInverse().asDiagonal();

    const Eigen::PartialPivLU<Matrix> lu(J);
    const Vector pivots = lu.matrixLU().diagonal();
    if (!pivots.allFinite() || (pivots.array() == 0.0).any()) throw SingularJacobian(step_index);
    const Vector step =
        lu.solve(eval.residual.cwiseQuotient(eval.scale)).cwiseQuotient(columns);
    if (!step.allFinite()) throw SingularJacobian(step_index);

    double lambda = 1.0;
    bool accepted = false;
    for (int h = 0; h <= settings.max_halvings; ++h, lambda *= 0.5) {
      const Vector trial = u - lambda * step;
      if (!interior(trial)) continue;
      SimState candidate = unpack(trial, t_next);
      Evaluation trial_eval = evaluate(candidate, previous, dt, params, c, alpha);
      if (trial_eval.norm < eval.norm) {
        u = trial;
        current = std::move(candidate);
        eval = std::move(trial_eval);
        accepted = true;
        break;
      }
    }
    if (!accepted) throw NonConvergence(step_index, eval.norm);
  }
  if (eval.norm <= settings.residual_tolerance) {
    return {current, settings.max_newton_iterations, eval.norm};
  }
  throw NonConvergence(step_index, eval.norm);
}

struct Advance {
  SimState state;
  int iterations = 0;
  int substeps = 0;
  double norm = 0.0;
};

Advance advance(const SimState& previous, double dt, const ModelParams& params,
                const ForcingSignal& nutrient, const ForcingSignal& antibiotic, long step_index,
                const SolverSettings& settings, int depth) {
  const double t_next = previous.t + dt;
  const double c = nutrient.evaluate(t_next, step_index);
  const double alpha = antibiotic.evaluate(t_next, step_index);
  try {
    NewtonResult r = newton(previous, dt, params, c, alpha, step_index, settings);
    return {std::move(r.state), r.iterations, 1, r.norm};
  } catch (const NonConvergence&) {
    if (depth >= settings.max_substep_depth) throw;
  } catch (const SingularJacobian&) {
    if (depth >= settings.max_substep_depth) throw;
  } catch (const BarrierDomainError&) {
    if (depth >= settings.max_substep_depth) throw;
  }
  Advance first =
      advance(previous, 0.5 * dt, params, nutrient, antibiotic, step_index, settings, depth + 1);
  Advance second =
      advance(first.state, 0.5 * dt, params, nutrient, antibiotic, step_index, settings, depth + 1);
  second.iterations += first.iterations;
  second.substeps += first.substeps;
  return second;
}

}  // namespace

NonConvergence::NonConvergence(long step_index, double best_norm)
    : std::runtime_error(nonconvergence_message(step_index, best_norm)),
      step_index_(step_index),
      best_norm_(best_norm) {}

SingularJacobian::SingularJacobian(long step_index)
    : std::runtime_error(singular_message(step_index)), step_index_(step_index) {}

std::string to_string(Termination termination) {
  switch (termination) {
    case Termination::Completed: return "completed";
    case Termination::SteadyState: return "steady-state";
    case Termination::Failure: return "failure";
  }
  return "unknown";
}

StepResult solve_step(const SimState& previous, double dt, const ModelParams& params,
                      const ForcingSignal& nutrient, const ForcingSignal& antibiotic,
                      long step_index, const SolverSettings& settings) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (previous.species_count() != params.species_count()) {
    throw DimensionError("state does not match the species count");
  }
  Advance a;
  try {
    a = advance(previous, dt, params, nutrient, antibiotic, step_index, settings, 0);
  } catch (const NonConvergence&) {
    throw;
  } catch (const SingularJacobian&) {
    throw;
  } catch (const BarrierDomainError&) {
    throw NonConvergence(step_index, std::numeric_limits<double>::infinity());
  }

  StepResult result{std::move(a.state), {}};
  const SimState& s = result.state;
  result.diagnostics.newton_iterations = a.iterations;
  result.diagnostics.residual_norm = a.norm;
  result.diagnostics.substeps = a.substeps;
  result.diagnostics.constraint_violation = s.constraint_violation();
  result.diagnostics.dissipation =
      dissipation_rate(s, (s.phi0 - previous.phi0) / dt, (s.phi - previous.phi) / dt,
                       (s.psi - previous.psi) / dt, params);
  return result;
}

namespace {

Trajectory integrate(const ScenarioConfig& config) {
  const SolverSettings& settings = config.solver;

  Trajectory traj;
  traj.scenario = config.name;
  traj.points.reserve(static_cast<std::size_t>(settings.steps) + 1);

  TrajectoryPoint first;
  first.step = 0;
  first.state = initial_state(config.initial_phi, config.initial_psi);
  first.nutrient = config.nutrient.evaluate(0.0, 0);
  first.antibiotic = config.antibiotic.evaluate(0.0, 0);
  first.diagnostics.newton_iterations = 0;
  first.diagnostics.constraint_violation = first.state.constraint_violation();
  traj.points.push_back(std::move(first));

  for (long k = 1; k <= settings.steps; ++k) {
    const SimState& previous = traj.points.back().state;
    StepResult r;
    try {
      r = solve_step(previous, settings.dt, config.params, config.nutrient, config.antibiotic, k,
                     settings);
    } catch (const std::exception& e) {
      traj.termination = Termination::Failure;
      traj.failure_step = k;
      traj.failure_message = e.what();
      return traj;
    }
    // Pin the grid time; repeated addition drifts.
    r.state.t = static_cast<double>(k) * settings.dt;

    double change = 0.0;
    if (settings.steady_state_tolerance > 0.0) {
      const Vector delta = pack(r.state) - pack(previous);
      change = delta.head(delta.size() - 1).cwiseAbs().maxCoeff();
    }
    TrajectoryPoint point;
    point.step = k;
    point.state = std::move(r.state);
    point.diagnostics = r.diagnostics;
    point.nutrient = config.nutrient.evaluate(point.state.t, k);
    point.antibiotic = config.antibiotic.evaluate(point.state.t, k);
    traj.points.push_back(std::move(point));

    if (settings.steady_state_tolerance > 0.0 && change <= settings.steady_state_tolerance) {
      traj.termination = Termination::SteadyState;
      return traj;
    }
  }
  traj.termination = Termination::Completed;
  return traj;
}

}  // namespace

Trajectory run(const ScenarioConfig& config) {
  config.validate();
  // Integrate with the species in a label-independent order, so relabelling
  // the input relabels the output bit for bit.
  const std::vector<int> order = canonical_species_order(config);
  Trajectory traj = integrate(relabel_species(config, order));
  traj.scenario = config.name;
  for (TrajectoryPoint& point : traj.points) {
    SimState& s = point.state;
    const Vector phi = s.phi, psi = s.psi;
    for (std::size_t i = 0; i < order.size(); ++i) {
      s.phi(order[i]) = phi(static_cast<Eigen::Index>(i));
      s.psi(order[i]) = psi(static_cast<Eigen::Index>(i));
    }
  }
  return traj;
}

}  // namespace biofilm

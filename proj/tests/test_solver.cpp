#include "biofilm/presets.hpp"
#include "biofilm/solver.hpp"
#include "biofilm/verification.hpp"

#include <doctest.h>

using namespace biofilm;
using doctest::Approx;

namespace {

// First backward Euler step of two-1 from an independent implementation.
constexpr double two1_step1[] = {0.5984907803188914,  0.20125976643113422, 0.20024945324997445,
                                 0.9999820562261447,  0.9999716057640583,  15.09211483775467};

ScenarioConfig single(double phi, double psi) {
  Vector one(1);
  one << 1.0;
  ScenarioConfig c{"single", "", ModelParams(Matrix::Ones(1, 1), Vector::Zero(1), one),
                   Vector::Constant(1, phi), Vector::Constant(1, psi),
                   ForcingSignal::constant(0.0), ForcingSignal::constant(0.0), {}, {}};
  return c;
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("solver settings validation") {
  SolverSettings s;
  CHECK_NOTHROW(s.validate());
  s.dt = 0.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = {};
  s.steps = -1;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = {};
  s.residual_tolerance = 0.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = {};
  s.max_newton_iterations = 0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("stationary midpoint state needs no work") {
  const ScenarioConfig c = single(0.5, 0.5);
  const SimState start = initial_state(c.initial_phi, c.initial_psi);
  const StepResult r = solve_step(start, 1e-4, c.params, c.nutrient, c.antibiotic, 1, c.solver);
  CHECK(r.diagnostics.newton_iterations <= 2);
  CHECK(std::abs(r.state.phi(0) - 0.5) < 1e-12);
  CHECK(std::abs(r.state.psi(0) - 0.5) < 1e-12);
  CHECK(r.diagnostics.dissipation < 1e-20);
  CHECK(r.state.t == Approx(1e-4));
}

TEST_CASE("first step of two-1") {
  const ScenarioConfig c = preset("two-1");
  const SimState start = initial_state(c.initial_phi, c.initial_psi);
  const StepResult r = solve_step(start, c.solver.dt, c.params, c.nutrient, c.antibiotic, 1, c.solver);
  const Vector u = pack(r.state);
  for (int k = 0; k < 5; ++k) CHECK(u(k) == Approx(two1_step1[k]).epsilon(1e-9));
  CHECK(u(5) == Approx(two1_step1[5]).epsilon(1e-7));
  CHECK(std::abs(r.state.constraint_violation()) <= 1e-10);
  CHECK(r.diagnostics.dissipation >= 0.0);
  CHECK(r.diagnostics.residual_norm <= c.solver.residual_tolerance);

  // Independent rate-form integration over the same step.
  ScenarioConfig one = c;
  one.solver.steps = 1;
  const Trajectory ref = reference_trajectory(one, 100);
  REQUIRE(ref.ok());
  const SimState& s = ref.points.back().state;
  CHECK(std::abs(s.phi0 - r.state.phi0) <= 1e-4);
  CHECK((s.phi - r.state.phi).cwiseAbs().maxCoeff() <= 1e-4);
}

TEST_CASE("halving the step changes a single step at first order") {
  const ScenarioConfig c = preset("two-1");
  const SimState start = initial_state(c.initial_phi, c.initial_psi);
  const auto advance = [&](double dt, int count) {
    SimState s = start;
    for (int k = 0; k < count; ++k) {
      s = solve_step(s, dt, c.params, c.nutrient, c.antibiotic, k + 1, c.solver).state;
    }
    return s;
  };
  const auto gap = [](const SimState& a, const SimState& b) {
    return std::max(std::abs(a.phi0 - b.phi0), (a.phi - b.phi).cwiseAbs().maxCoeff());
  };
  const double dt = 1e-3;
  const double coarse = gap(advance(dt, 1), advance(dt / 2, 2));
  const double fine = gap(advance(dt / 2, 1), advance(dt / 4, 2));
  CHECK(coarse <= 10.0 * dt);
  CHECK(fine < coarse);
}

TEST_CASE("run with zero steps returns the initial state") {
  ScenarioConfig c = preset("two-3");
  c.solver.steps = 0;
  const Trajectory t = run(c);
  REQUIRE(t.points.size() == 1);
  CHECK(t.termination == Termination::Completed);
  CHECK(t.points[0].state.t == 0.0);
  CHECK(t.points[0].state.constraint_violation() == 0.0);
  CHECK(t.scenario == "two-3");
}

TEST_CASE("two identical species evolve identically") {
  Matrix A(2, 2);
  A << 1.0, 0.5, 0.5, 1.0;
  Vector b = Vector::Constant(2, 0.5), eta = Vector::Constant(2, 1.5);
  ScenarioConfig c{"twins", "", ModelParams(A, b, eta), Vector::Constant(2, 0.15),
                   Vector::Constant(2, 0.9), ForcingSignal::constant(80.0),
                   ForcingSignal::constant(5.0), {}, {}};
  c.solver.steps = 400;
  const Trajectory t = run(c);
  REQUIRE(t.ok());
  for (const auto& p : t.points) {
    CHECK(p.state.phi(0) == p.state.phi(1));
    CHECK(p.state.psi(0) == p.state.psi(1));
  }
}

TEST_CASE("two-2 keeps the constraint at every step") {
  const Trajectory t = run(preset("two-2"));
  CHECK(t.termination == Termination::Completed);
  CHECK(t.points.size() == 1501);
  double worst = 0.0;
  for (const auto& p : t.points) worst = std::max(worst, std::abs(p.state.constraint_violation()));
  CHECK(worst <= 1e-8);
  for (std::size_t k = 1; k < t.points.size(); ++k) CHECK(t.points[k].state.t > t.points[k - 1].state.t);
  CHECK(t.points.back().state.t == Approx(0.15));
}

TEST_CASE("steady-state stop") {
  ScenarioConfig c = preset("two-1");
  c.solver.steps = 5000;
  c.solver.steady_state_tolerance = 1e-9;
  const Trajectory t = run(c);
  CHECK(t.termination == Termination::SteadyState);
  CHECK(t.points.size() < 5001);
}

TEST_CASE("failures keep the computed prefix") {
  ScenarioConfig c = preset("two-1");
  c.solver.max_newton_iterations = 1;
  c.solver.max_substep_depth = 0;
  const Trajectory t = run(c);
  CHECK(t.termination == Termination::Failure);
  CHECK(t.failure_step >= 1);
  CHECK(static_cast<long>(t.points.size()) == t.failure_step);
  CHECK(t.failure_message.find("step") != std::string::npos);
}

TEST_CASE("solve_step reports non-convergence") {
  const ScenarioConfig c = preset("two-1");
  SolverSettings s = c.solver;
  s.max_newton_iterations = 1;
  s.max_substep_depth = 0;
  const SimState start = initial_state(c.initial_phi, c.initial_psi);
  try {
    solve_step(start, 1e-4, c.params, c.nutrient, c.antibiotic, 7, s);
    FAIL("expected NonConvergence");
  } catch (const NonConvergence& e) {
    CHECK(e.step_index() == 7);
    CHECK(e.best_norm() > s.residual_tolerance);
  }
}

TEST_CASE("substepping rescues a hard step") {
  ScenarioConfig c = preset("two-6");
  const Trajectory t = run(c);
  REQUIRE(t.ok());
  int most = 1;
  for (const auto& p : t.points) most = std::max(most, p.diagnostics.substeps);
  CHECK(most > 1);
}

TEST_CASE("determinism") {
  const Trajectory a = run(preset("four-3"));
  const Trajectory b = run(preset("four-3"));
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t k = 0; k < a.points.size(); ++k) {
    CHECK(a.points[k].state == b.points[k].state);
    CHECK(a.points[k].diagnostics == b.points[k].diagnostics);
  }
}

TEST_CASE("termination names") {
  CHECK(to_string(Termination::Completed) == "completed");
  CHECK(to_string(Termination::SteadyState) == "steady-state");
  CHECK(to_string(Termination::Failure) == "failure");
}

}  // TEST_SUITE

#include "biofilm/verification.hpp"

#include "biofilm/csv.hpp"
#include "biofilm/config_format.hpp"
#include "biofilm/presets.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_odeiv2.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>

namespace biofilm {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

SimState random_interior(int n, std::mt19937_64& rng) {
  SimState s;
  s.phi0 = uniform(rng, 0.05, 0.95);
  s.phi = Vector(n);
  s.psi = Vector(n);
  for (int i = 0; i < n; ++i) {
    s.phi(i) = uniform(rng, 0.05, 0.95);
    s.psi(i) = uniform(rng, 0.05, 0.95);
  }
  return s;
}

// Relative error with the 1e-10 absolute floor folded into the scale.
double relative(double deviation, double magnitude) {
  return deviation / std::max(magnitude, 1e-10 / fd_tolerance);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// -K [ln x + ln(1 - x)], written out independently of the model code.
double barrier_potential(double x, double k) { return -k * (std::log(x) + std::log(1.0 - x)); }

double potential(const SimState& s, const ModelParams& p, double c, double alpha) {
  double total = free_energy_density(s, p, c, alpha) + barrier_potential(s.phi0, p.empty_penalty());
  for (int i = 0; i < s.species_count(); ++i) {
    total += barrier_potential(s.phi(i), p.penalty(i)) + barrier_potential(s.psi(i), p.penalty(i));
  }
  return total;
}

// Central difference of f along unknown k of a packed state (gamma excluded).
double central(const std::function<double(const SimState&)>& f, const SimState& s, int k) {
  Vector u = pack(s);
  u(k) += fd_step;
  const double up = f(unpack(u, s.t));
  u(k) -= 2.0 * fd_step;
  const double down = f(unpack(u, s.t));
  return (up - down) / (2.0 * fd_step);
}

CheckReport finish(CheckReport r) {
  r.passed = r.worst_error <= fd_tolerance;
  return r;
}

}  // namespace

std::string summary_line(const CheckReport& r) {
  std::string line = (r.passed ? "PASS " : "FAIL ") + r.name + "  worst=" + fmt(r.worst_error);
  if (!r.location.empty()) line += "  at " + r.location;
  if (r.seed) line += "  seed=" + std::to_string(r.seed);
  return line;
}

void write_reports(const std::vector<CheckReport>& reports, const std::string& path) {
  std::ostringstream os;
  os << "name,passed,worst_error,location,seed\n";
  for (const auto& r : reports) {
    std::string location = r.location;
    std::replace(location.begin(), location.end(), ',', ';');
    os << r.name << ',' << (r.passed ? 1 : 0) << ',' << format_number(r.worst_error) << ','
       << location << ',' << r.seed << '\n';
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw OutputError("cannot open '" + path + "' for writing: " + std::strerror(errno));
  file << os.str();
  if (!file.flush()) throw OutputError("failed writing '" + path + "': " + std::strerror(errno));
}

CheckReport check_energy_gradient(const ModelParams& params, int sample_count, double nutrient,
                                  double antibiotic, std::uint64_t seed) {
  if (sample_count < 1) throw std::invalid_argument("sample_count must be at least 1");
  const int n = params.species_count();
  CheckReport report{"energy gradient n=" + std::to_string(n), false, 0.0, "", seed};
  std::mt19937_64 rng(seed);
  const auto f = [&](const SimState& s) { return potential(s, params, nutrient, antibiotic); };
  for (int sample = 0; sample < sample_count; ++sample) {
    const SimState s = random_interior(n, rng);
    // With next == previous and gamma = 0 only the stationary forces remain.
    const Vector analytic = residual({s, s, 1.0, params, nutrient, antibiotic}).head(2 * n + 1);
    Vector fd(2 * n + 1);
    for (int k = 0; k < 2 * n + 1; ++k) fd(k) = central(f, s, k);
    Eigen::Index row = 0;
    const double dev = (analytic - fd).cwiseAbs().maxCoeff(&row);
    const double err = relative(dev, std::max(analytic.cwiseAbs().maxCoeff(), fd.cwiseAbs().maxCoeff()));
    if (err > report.worst_error || sample == 0) {
      report.worst_error = err;
      report.location = "sample " + std::to_string(sample) + " row " + std::to_string(row);
    }
  }
  return finish(report);
}

CheckReport check_dissipation_gradient(const ModelParams& params, int sample_count,
                                       std::uint64_t seed) {
  if (sample_count < 1) throw std::invalid_argument("sample_count must be at least 1");
  const int n = params.species_count();
  CheckReport report{"dissipation gradient n=" + std::to_string(n), false, 0.0, "", seed};
  std::mt19937_64 rng(seed);
  for (int sample = 0; sample < sample_count; ++sample) {
    const SimState s = random_interior(n, rng);
    const double dt = uniform(rng, 1e-3, 1.0);
    Vector rates(2 * n + 1);
    for (int k = 0; k < rates.size(); ++k) rates(k) = uniform(rng, -5.0, 5.0);
    SimState previous = s;
    previous.phi0 = s.phi0 - dt * rates(0);
    previous.phi = s.phi - dt * rates.segment(1, n);
    previous.psi = s.psi - dt * rates.segment(1 + n, n);

    const Vector analytic = (residual({s, previous, dt, params, 0.0, 0.0}) -
                             residual({s, s, dt, params, 0.0, 0.0}))
                                .head(2 * n + 1);
    const auto half_power = [&](const Vector& r) {
      return 0.5 * dissipation_rate(s, r(0), r.segment(1, n), r.segment(1 + n, n), params);
    };
    Vector fd(2 * n + 1);
    for (int k = 0; k < 2 * n + 1; ++k) {
      Vector up = rates, down = rates;
      up(k) += fd_step;
      down(k) -= fd_step;
      fd(k) = (half_power(up) - half_power(down)) / (2.0 * fd_step);
    }
    Eigen::Index row = 0;
    const double dev = (analytic - fd).cwiseAbs().maxCoeff(&row);
    const double err = relative(dev, std::max(analytic.cwiseAbs().maxCoeff(), fd.cwiseAbs().maxCoeff()));
    if (err > report.worst_error || sample == 0) {
      report.worst_error = err;
      report.location = "sample " + std::to_string(sample) + " row " + std::to_string(row);
    }
  }
  return finish(report);
}

CheckReport check_jacobian(const ModelParams& params, int sample_count, std::uint64_t seed) {
  if (sample_count < 1) throw std::invalid_argument("sample_count must be at least 1");
  const int n = params.species_count();
  const int m = params.unknown_count();
  CheckReport report{"jacobian n=" + std::to_string(n) +
                         (params.psi_multiplier() ? " psi-multiplier" : ""),
                     false, 0.0, "", seed};
  std::mt19937_64 rng(seed);
  for (int sample = 0; sample < sample_count; ++sample) {
    SimState next = random_interior(n, rng);
    next.gamma = uniform(rng, -50.0, 50.0);
    SimState previous = next;
    previous.phi0 += uniform(rng, -0.05, 0.05);
    for (int i = 0; i < n; ++i) {
      previous.phi(i) += uniform(rng, -0.05, 0.05);
      previous.psi(i) += uniform(rng, -0.05, 0.05);
    }
    const double dt = std::pow(10.0, uniform(rng, -4.0, -1.0));
    const double c = uniform(rng, 0.0, 200.0);
    const double alpha = uniform(rng, 0.0, 50.0);

    const Matrix J = jacobian({next, previous, dt, params, c, alpha});
    Matrix fd(m, m);
    const Vector u = pack(next);
    for (int k = 0; k < m; ++k) {
      Vector up = u, down = u;
      up(k) += fd_step;
      down(k) -= fd_step;
      const SimState su = unpack(up, next.t), sd = unpack(down, next.t);
      fd.col(k) = (residual({su, previous, dt, params, c, alpha}) -
                   residual({sd, previous, dt, params, c, alpha})) /
                  (2.0 * fd_step);
    }
    for (int r = 0; r < m; ++r) {
      Eigen::Index col = 0;
      const double dev = (J.row(r) - fd.row(r)).cwiseAbs().maxCoeff(&col);
      const double err = relative(dev, std::max(J.row(r).cwiseAbs().maxCoeff(),
                                                fd.row(r).cwiseAbs().maxCoeff()));
      if (err > report.worst_error || (sample == 0 && r == 0)) {
        report.worst_error = err;
        report.location = "sample " + std::to_string(sample) + " entry (" + std::to_string(r) +
                          "," + std::to_string(col) + ")";
      }
    }
  }
  return finish(report);
}

ModelParams random_params(int n, std::mt19937_64& rng) {
  Matrix A(n, n);
  Vector b(n), eta(n);
  for (int i = 0; i < n; ++i) {
    A(i, i) = uniform(rng, 0.5, 2.0);
    for (int j = 0; j < i; ++j) A(i, j) = A(j, i) = uniform(rng, -1.0, 2.0);
    b(i) = uniform(rng, 0.0, 2.0);
    eta(i) = uniform(rng, 0.5, 2.0);
  }
  return ModelParams(A, b, eta);
}

ScenarioConfig random_config(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int n = 1 + static_cast<int>(rng() % 4);
  ModelParams params = random_params(n, rng);
  Vector phi(n), psi(n);
  for (int i = 0; i < n; ++i) {
    phi(i) = uniform(rng, 0.02, 0.6 / n);
    psi(i) = rng() % 3 == 0 ? 1.0 : uniform(rng, 0.3, 1.0);
  }
  ForcingSignal nutrient = ForcingSignal::constant(uniform(rng, 20.0, 120.0));
  if (rng() % 2 == 0) {
    const double offset = uniform(rng, 30.0, 100.0);
    nutrient = ForcingSignal::Sinusoid{offset, uniform(rng, 0.0, offset), uniform(rng, 10.0, 500.0)};
  }
  ForcingSignal antibiotic = ForcingSignal::constant(uniform(rng, 0.0, 20.0));
  if (rng() % 3 == 0) {
    antibiotic = ForcingSignal::Step{uniform(rng, 50.0, 250.0), 0.0, uniform(rng, 0.0, 50.0)};
  }
  ScenarioConfig config{"random-" + std::to_string(seed), "randomized scenario", params, phi, psi,
                        nutrient, antibiotic, {}, {}};
  config.solver.steps = 300;
  return config;
}

namespace {

// Rate form of the evolution equations. Unknowns of the linear system are
// (phi0_dot, phi_dot, psi_dot, gamma); the last row is the differentiated
// volume constraint.
class RateSystem {
 public:

  RateSystem(const ModelParams& params) : p_(params), n_(params.species_count()) {}

  void set_forcing(double c, double alpha) {
    c_ = c;
    alpha_ = alpha;
  }

  // Returns false when the state is outside the open box.
  // y = (phi0, phi_1..n, psi_1..n). Returns false outside the open box.
  bool solve(const double* y, Vector& solution) const {
    for (int k = 0; k < 2 * n_ + 1; ++k) {
      if (!(y[k] > 0.0 && y[k] < 1.0)) return false;
    }
    const int n = n_;
    const int m = 2 * n + 2;
    const double kb = p_.barrier_scale();
    Matrix M = Matrix::Zero(m, m);
    Vector f(m);

    Vector living(n);
    for (int i = 0; i < n; ++i) living(i) = y[1 + i] * y[1 + n + i];

    M(0, 0) = p_.empty_viscosity();
    M(0, m - 1) = 1.0;
    f(0) = -force(y[0], p_.empty_viscosity() * kb);
    for (int i = 0; i < n; ++i) {
      const double phi = y[1 + i], psi = y[1 + n + i], eta = p_.viscosity()(i);
      double drive = 0.0;
      for (int j = 0; j < n; ++j) drive += p_.growth()(i, j) * living(j);
      M(1 + i, 1 + i) = eta * (psi * psi + 1.0);
      M(1 + i, 1 + n + i) = eta * phi * psi;
      M(1 + i, m - 1) = 1.0;
      f(1 + i) = c_ * psi * drive - force(phi, eta * kb);
      M(1 + n + i, 1 + i) = eta * phi * psi;
      M(1 + n + i, 1 + n + i) = eta * phi * phi;
      M(1 + n + i, m - 1) = p_.psi_multiplier() ? 1.0 : 0.0;
      f(1 + n + i) = c_ * phi * drive - alpha_ * p_.sensitivity()(i) * psi - force(psi, eta * kb);
    }
    for (int k = 0; k <= n; ++k) M(m - 1, k) = 1.0;
    f(m - 1) = 0.0;

    const Eigen::ColPivHouseholderQR<Matrix> qr(M);
    if (qr.rank() < m) throw std::runtime_error("rate matrix is singular");
    solution = qr.solve(f);
    return solution.allFinite();
  }

  int dimension() const { return 2 * n_ + 1; }

 private:
  static double force(double x, double k) { return k * (1.0 / (1.0 - x) - 1.0 / x); }

  const ModelParams& p_;
  int n_;
  double c_ = 0.0;
  double alpha_ = 0.0;
};

TrajectoryPoint reference_point(long step, double t, const std::vector<double>& y,
                                 const RateSystem& system, double c, double alpha, int n) {
  TrajectoryPoint point;
  point.step = step;
  point.state.t = t;
  point.state.phi0 = y[0];
  point.state.phi = Vector(n);
  point.state.psi = Vector(n);
  for (int i = 0; i < n; ++i) {
    point.state.phi(i) = y[1 + i];
    point.state.psi(i) = y[1 + n + i];
  }
  Vector solution;
  if (system.solve(y.data(), solution)) point.state.gamma = solution(2 * n + 1);
  point.nutrient = c;
  point.antibiotic = alpha;
  point.diagnostics.constraint_violation = point.state.constraint_violation();
  return point;
}

struct ReferenceContext {
  const ScenarioConfig& config;
  RateSystem& system;
  long step;
};

int reference_rates(double t, const double y[], double dydt[], void* data) {
  auto& ctx = *static_cast<ReferenceContext*>(data);
  ctx.system.set_forcing(ctx.config.nutrient.evaluate(t, ctx.step),
                         ctx.config.antibiotic.evaluate(t, ctx.step));
  Vector solution;
  try {
    // GSL retries with a smaller step on any status other than success.
    if (!ctx.system.solve(y, solution)) return GSL_EDOM;
  } catch (const std::runtime_error&) {
    return GSL_ESING;
  }
  for (int k = 0; k < ctx.system.dimension(); ++k) dydt[k] = solution(k);
  return GSL_SUCCESS;
}

// Central differences in y and t, with the step shrunk near the bounds.
int reference_jacobian(double t, const double y[], double* dfdy, double dfdt[], void* data) {
  auto& ctx = *static_cast<ReferenceContext*>(data);
  const int m = ctx.system.dimension();
  std::vector<double> point(y, y + m), up(m), down(m);
  for (int k = 0; k < m; ++k) {
    const double h = std::min(1e-7, 1e-2 * std::min(y[k], 1.0 - y[k]));
    point[k] = y[k] + h;
    int status = reference_rates(t, point.data(), up.data(), data);
    point[k] = y[k] - h;
    status |= reference_rates(t, point.data(), down.data(), data);
    point[k] = y[k];
    if (status != GSL_SUCCESS) return status;
    for (int r = 0; r < m; ++r) dfdy[r * m + k] = (up[r] - down[r]) / (2.0 * h);
  }
  const double h = 1e-6 * ctx.config.solver.dt;
  int status = reference_rates(t + h, y, up.data(), data);
  status |= reference_rates(t - h, y, down.data(), data);
  for (int r = 0; r < m; ++r) dfdt[r] = (up[r] - down[r]) / (2.0 * h);
  return status;
}

}  // namespace

Trajectory reference_trajectory(const ScenarioConfig& config, int substep_factor) {
  if (substep_factor < 10) throw std::invalid_argument("substep_factor must be at least 10");
  config.validate();
  const int n = config.params.species_count();
  const double dt = config.solver.dt;
  const double max_substep = dt / substep_factor;

  RateSystem system(config.params);
  const SimState start = initial_state(config.initial_phi, config.initial_psi);
  std::vector<double> y(2 * n + 1);
  y[0] = start.phi0;
  for (int i = 0; i < n; ++i) {
    y[1 + i] = start.phi(i);
    y[1 + n + i] = start.psi(i);
  }

  Trajectory traj;
  traj.scenario = config.name + " (reference)";
  double c = config.nutrient.evaluate(0.0, 0);
  double alpha = config.antibiotic.evaluate(0.0, 0);
  system.set_forcing(c, alpha);
  traj.points.push_back(reference_point(0, 0.0, y, system, c, alpha, n));

  // The barrier makes the rate field very stiff near the bounds, so the
  // reference uses the implicit 4th order Gauss scheme.
  gsl_set_error_handler_off();
  ReferenceContext ctx{config, system, 1};
  gsl_odeiv2_system ode{reference_rates, reference_jacobian, y.size(), &ctx};
  std::unique_ptr<gsl_odeiv2_driver, decltype(&gsl_odeiv2_driver_free)> driver(
      gsl_odeiv2_driver_alloc_y_new(&ode, gsl_odeiv2_step_rk4imp, max_substep, 1e-8, 1e-8),
      gsl_odeiv2_driver_free);
  gsl_odeiv2_driver_set_hmax(driver.get(), max_substep);

  for (long k = 1; k <= config.solver.steps; ++k) {
    // Step-indexed signals hold the value of the step being approached.
    ctx.step = k;
    double t = static_cast<double>(k - 1) * dt;
    const double t1 = static_cast<double>(k) * dt;
    int status = gsl_odeiv2_driver_apply(driver.get(), &t, t1, y.data());
    if (status != GSL_SUCCESS && t1 - t <= 1e-9 * dt) {
      // Rounding left a sliver of the interval that GSL refuses to step.
      status = GSL_SUCCESS;
      gsl_odeiv2_driver_reset_hstart(driver.get(), max_substep);
    }
    if (status != GSL_SUCCESS) {
      traj.termination = Termination::Failure;
      traj.failure_step = k;
      traj.failure_message = "reference integrator stalled near t=" + fmt(t) + ": " +
                             gsl_strerror(status);
      return traj;
    }
    c = config.nutrient.evaluate(t1, k);
    alpha = config.antibiotic.evaluate(t1, k);
    system.set_forcing(c, alpha);
    traj.points.push_back(reference_point(k, t1, y, system, c, alpha, n));
  }
  traj.termination = Termination::Completed;
  return traj;
}

double trajectory_discrepancy(const Trajectory& a, const Trajectory& b) {
  double worst = 0.0;
  std::size_t j = 0;
  for (const auto& pa : a.points) {
    while (j < b.points.size() && b.points[j].step < pa.step) ++j;
    if (j == b.points.size()) break;
    if (b.points[j].step != pa.step) continue;
    const SimState& x = pa.state;
    const SimState& y = b.points[j].state;
    worst = std::max(worst, std::abs(x.phi0 - y.phi0));
    worst = std::max(worst, (x.phi - y.phi).cwiseAbs().maxCoeff());
    worst = std::max(worst, (x.phi.cwiseProduct(x.psi) - y.phi.cwiseProduct(y.psi)).cwiseAbs().maxCoeff());
  }
  return worst;
}

ConvergenceStudy convergence_study(const ScenarioConfig& config, const std::vector<double>& dts,
                                   int substep_factor) {
  ConvergenceStudy study;
  const double final_time = config.solver.dt * static_cast<double>(config.solver.steps);
  for (double dt : dts) {
    ScenarioConfig c = config;
    c.solver.dt = dt;
    c.solver.steps = std::lround(final_time / dt);
    const Trajectory be = run(c);
    const Trajectory ref = reference_trajectory(c, substep_factor);
    const bool complete = be.ok() && ref.ok();
    study.dts.push_back(dt);
    study.errors.push_back(complete ? trajectory_discrepancy(be, ref)
                                    : std::numeric_limits<double>::infinity());
  }
  for (std::size_t k = 0; k + 1 < study.errors.size(); ++k) {
    study.orders.push_back(std::log(study.errors[k] / study.errors[k + 1]) /
                           std::log(study.dts[k] / study.dts[k + 1]));
  }
  return study;
}

CheckReport check_trajectory_properties(const Trajectory& traj, const ScenarioConfig& config) {
  CheckReport report{"properties " + config.name, false, 0.0, "", 0};
  if (!traj.ok()) {
    report.worst_error = std::numeric_limits<double>::infinity();
    report.location = traj.failure_message;
    return report;
  }
  const ModelParams& p = config.params;
  const int n = p.species_count();
  std::string problem;
  for (std::size_t k = 0; k < traj.points.size() && problem.empty(); ++k) {
    const SimState& s = traj.points[k].state;
    const std::string where = "step " + std::to_string(traj.points[k].step);
    const double violation = std::abs(s.constraint_violation());
    if (violation > report.worst_error) {
      report.worst_error = violation;
      report.location = where;
    }
    if (violation > constraint_tolerance) problem = "constraint violated at " + where;
    bool inside = s.phi0 > 0.0 && s.phi0 < 1.0;
    for (int i = 0; i < n; ++i) {
      inside = inside && s.phi(i) > 0.0 && s.phi(i) < 1.0 && s.psi(i) > 0.0 && s.psi(i) < 1.0;
    }
    if (!inside) problem = "fraction outside (0,1) at " + where;
    if (k > 0) {
      const SimState& prev = traj.points[k - 1].state;
      const double dt = s.t - prev.t;
      const double power = dissipation_rate(s, (s.phi0 - prev.phi0) / dt, (s.phi - prev.phi) / dt,
                                            (s.psi - prev.psi) / dt, p);
      if (!(power >= dissipation_floor)) problem = "negative dissipation at " + where;
      if (!(dt > 0.0)) problem = "time not increasing at " + where;
    }
  }
  report.passed = problem.empty();
  if (!problem.empty()) report.location = problem;
  return report;
}

CheckReport check_determinism(const ScenarioConfig& config) {
  CheckReport report{"determinism " + config.name, false, 0.0, "", 0};
  std::ostringstream first, second;
  write_trajectory(run(config), 1, first);
  write_trajectory(run(config), 1, second);
  report.passed = first.str() == second.str();
  if (!report.passed) {
    report.worst_error = 1.0;
    report.location = "CSV output differs between runs";
  }
  return report;
}

CheckReport check_permutation(const ScenarioConfig& config, const std::vector<int>& perm) {
  std::string label;
  for (int k : perm) label += std::to_string(k + 1);
  CheckReport report{"permutation " + config.name + " [" + label + "]", false, 0.0, "", 0};
  const Trajectory a = run(config);
  const Trajectory b = run(relabel_species(config, perm));
  if (a.points.size() != b.points.size() || a.termination != b.termination) {
    report.worst_error = std::numeric_limits<double>::infinity();
    report.location = "trajectories differ in length or termination";
    return report;
  }
  const int n = config.params.species_count();
  for (std::size_t k = 0; k < a.points.size(); ++k) {
    const SimState& x = a.points[k].state;
    const SimState& y = b.points[k].state;
    double dev = std::max(std::abs(x.phi0 - y.phi0),
                          std::abs(x.gamma - y.gamma) / std::max(1.0, std::abs(x.gamma)));
    for (int i = 0; i < n; ++i) {
      dev = std::max(dev, std::abs(y.phi(i) - x.phi(perm[i])));
      dev = std::max(dev, std::abs(y.psi(i) - x.psi(perm[i])));
    }
    if (dev > report.worst_error) {
      report.worst_error = dev;
      report.location = "step " + std::to_string(a.points[k].step);
    }
  }
  report.passed = report.worst_error <= equivariance_tolerance;
  return report;
}

namespace {

struct Observed {
  std::string name;
  Trajectory traj;
};

// First index with phi0 below the threshold, or npos.
std::size_t fill_event(const Trajectory& traj, double threshold = 0.01) {
  for (std::size_t k = 0; k < traj.points.size(); ++k) {
    if (traj.points[k].state.phi0 < threshold) return k;
  }
  return std::string::npos;
}

double phi_rate(const Trajectory& traj, std::size_t k, int i) {
  if (k == 0) return 0.0;
  const SimState& a = traj.points[k - 1].state;
  const SimState& b = traj.points[k].state;
  return (b.phi(i) - a.phi(i)) / (b.t - a.t);
}

int largest(const Vector& v) {
  Eigen::Index i = 0;
  v.maxCoeff(&i);
  return static_cast<int>(i);
}

double min_psi(const Trajectory& traj, int i) {
  double m = 1.0;
  for (const auto& p : traj.points) m = std::min(m, p.state.psi(i));
  return m;
}

CheckReport claim(const std::string& name, bool passed, double observed, const std::string& detail) {
  return {name, passed, observed, detail, 0};
}

}  // namespace

std::vector<CheckReport> figure_checks() {
  std::vector<CheckReport> out;
  const auto simulate = [](const std::string& name) { return run(preset(name)); };

  {
    const Trajectory t = simulate("two-1");
    const std::size_t e = fill_event(t);
    const bool found = e != std::string::npos;
    const double phi2 = found ? t.points[e].state.phi(1) : NAN;
    const double rate = found ? phi_rate(t, e, 1) : NAN;
    out.push_back(claim("two-1 phi2 near 0.10 and declining when space fills",
                        t.ok() && found && phi2 >= 0.05 && phi2 <= 0.15 && rate < 0.0, phi2,
                        found ? "step " + std::to_string(t.points[e].step) + " phi2=" + fmt(phi2) +
                                    " dphi2/dt=" + fmt(rate)
                              : "space never fills"));
    const SimState& f = t.final_state();
    bool fell = false;
    for (const auto& p : t.points) fell = fell || p.state.phi(1) < 0.05;
    out.push_back(claim("two-1 species 1 wins and psi2 drops below 0.5",
                        t.ok() && f.phi(0) > f.phi(1) && fell && f.psi(1) < 0.5, f.psi(1),
                        "final phi=(" + fmt(f.phi(0)) + "," + fmt(f.phi(1)) + ") psi2=" +
                            format_number(f.psi(1))));
  }
  {
    const Trajectory t = simulate("two-2");
    const std::size_t e = fill_event(t);
    const bool found = e != std::string::npos;
    const double phi2 = found ? t.points[e].state.phi(1) : NAN;
    const double rate = found ? phi_rate(t, e, 1) : NAN;
    out.push_back(claim("two-2 phi2 near 0.30 and rising when space fills",
                        t.ok() && found && phi2 >= 0.25 && phi2 <= 0.35 && rate > 0.0, phi2,
                        found ? "step " + std::to_string(t.points[e].step) + " phi2=" + fmt(phi2) +
                                    " dphi2/dt=" + fmt(rate)
                              : "space never fills"));
    const Trajectory one = simulate("two-1");
    const double gap = std::abs(t.final_state().phi(1) - one.final_state().phi(1));
    out.push_back(claim("two-2 final phi2 matches two-1", t.ok() && one.ok() && gap <= 0.05, gap,
                        "|difference|=" + fmt(gap)));
  }
  {
    const Trajectory t = simulate("two-3");
    const SimState& f = t.final_state();
    out.push_back(claim("two-3 both species persist", t.ok() && f.phi.minCoeff() > 0.05,
                        f.phi.minCoeff(), "final phi=(" + fmt(f.phi(0)) + "," + fmt(f.phi(1)) + ")"));
  }
  for (const auto& [name, winner] : {std::pair{"two-4", 1}, std::pair{"two-5", 0}}) {
    const Trajectory t = simulate(name);
    const SimState& f = t.final_state();
    out.push_back(claim(std::string(name) + " species " + std::to_string(winner + 1) + " dominates",
                        t.ok() && largest(f.phi) == winner, f.phi(winner),
                        "final phi=(" + fmt(f.phi(0)) + "," + fmt(f.phi(1)) + ")"));
  }
  {
    const Trajectory t = simulate("two-6");
    const SimState& f = t.final_state();
    out.push_back(claim("two-6 species 2 dominates", t.ok() && largest(f.phi) == 1, f.phi(1),
                        "final phi=(" + fmt(f.phi(0)) + "," + fmt(f.phi(1)) + ")"));
    const double m = std::min(min_psi(t, 0), min_psi(t, 1));
    out.push_back(claim("two-6 living shares stay above 0.5", t.ok() && m >= 0.5, m,
                        "min psi=(" + fmt(min_psi(t, 0)) + "," + fmt(min_psi(t, 1)) + ")"));
  }
  {
    const Trajectory t = simulate("four-1");
    const double m = min_psi(t, 3);
    out.push_back(claim("four-1 min psi4 in [0.15,0.30]", t.ok() && m >= 0.15 && m <= 0.30, m,
                        "min psi4=" + fmt(m)));
    const Vector& phi = t.final_state().phi;
    out.push_back(claim("four-1 species 1 dominates", t.ok() && largest(phi) == 0, phi(0),
                        "largest final phi is species " + std::to_string(largest(phi) + 1)));
  }
  {
    const Trajectory t = simulate("four-2");
    const Vector& phi = t.final_state().phi;
    out.push_back(claim("four-2 phi4 exceeds phi3", t.ok() && phi(3) > phi(2), phi(3) - phi(2),
                        "final phi3=" + fmt(phi(2)) + " phi4=" + fmt(phi(3))));
  }
  {
    const Trajectory t = simulate("four-4");
    long first = -1;
    for (const auto& p : t.points) {
      if (p.step > 500 && p.step <= 600 && p.state.psi.head(3).maxCoeff() < 0.1) {
        first = p.step;
        break;
      }
    }
    double at_600 = NAN;
    for (const auto& p : t.points) {
      if (p.step == 600) at_600 = p.state.psi.head(3).maxCoeff();
    }
    out.push_back(claim("four-4 species 1-3 die within 100 steps of the switch",
                        t.ok() && first > 0, at_600,
                        first > 0 ? "all below 0.1 at step " + std::to_string(first)
                                  : "max psi1-3 at step 600=" + fmt(at_600)));
    const Vector& phi = t.final_state().phi;
    out.push_back(claim("four-4 species 4 dominates", t.ok() && largest(phi) == 3, phi(3),
                        "largest final phi is species " + std::to_string(largest(phi) + 1)));
  }
  return out;
}

std::vector<CheckReport> verification_suite(bool quick) {
  std::vector<CheckReport> out;
  const int samples = quick ? 20 : 100;
  const int jacobian_samples = quick ? 10 : 50;
  std::mt19937_64 rng(default_seed);
  for (int n : {1, 2, 4}) {
    const ModelParams params = random_params(n, rng);
    out.push_back(check_energy_gradient(params, samples));
    out.push_back(check_dissipation_gradient(params, samples));
    out.push_back(check_jacobian(params, jacobian_samples));
  }
  {
    const ModelParams base = preset("two-1").params;
    const ModelParams printed(base.growth(), base.sensitivity(), base.viscosity(),
                              base.empty_viscosity(), base.barrier_scale(), true);
    out.push_back(check_jacobian(printed, jacobian_samples));
  }

  const ScenarioConfig two1 = preset("two-1");
  {
    const Trajectory be = run(two1);
    const Trajectory ref = reference_trajectory(two1, 100);
    const double gap = trajectory_discrepancy(be, ref);
    out.push_back({"two-1 backward Euler vs reference", be.ok() && ref.ok() && gap <= 1e-3, gap,
                   ref.ok() ? "dt=" + fmt(two1.solver.dt) : ref.failure_message, 0});
  }
  if (!quick) {
    const ConvergenceStudy study = convergence_study(two1, {1e-3, 5e-4, 2.5e-4});
    double worst = 0.0;
    std::string orders;
    for (double o : study.orders) {
      worst = std::max(worst, std::isfinite(o) ? std::abs(o - 1.0) : INFINITY);
      orders += (orders.empty() ? "" : " ") + fmt(o);
    }
    out.push_back({"two-1 convergence order", worst <= 0.3, worst, "orders " + orders, 0});
  }

  std::vector<ScenarioConfig> configs;
  for (const auto& name : preset_names()) configs.push_back(preset(name));
  const int random_count = quick ? 5 : 50;
  for (int k = 0; k < random_count; ++k) configs.push_back(random_config(default_seed + 1 + k));
  for (const auto& config : configs) {
    out.push_back(check_trajectory_properties(run(config), config));
    out.push_back(check_determinism(config));
    std::vector<int> reversed(config.params.species_count());
    for (int i = 0; i < static_cast<int>(reversed.size()); ++i) {
      reversed[i] = static_cast<int>(reversed.size()) - 1 - i;
    }
    out.push_back(check_permutation(config, reversed));
  }

  for (auto& r : figure_checks()) out.push_back(std::move(r));
  return out;
}

}  // namespace biofilm

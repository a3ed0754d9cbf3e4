#include "biofilm/model.hpp"

#include <cmath>
#include <sstream>

namespace biofilm {

namespace {

void require_same_size(const Vector& a, const Vector& b, const char* what) {
  if (a.size() != b.size()) {
    std::ostringstream msg;
    msg << what << ": size mismatch (" << a.size() << " vs " << b.size() << ")";
    throw DimensionError(msg.str());
  }
}

void require_interior(double x, const char* name) {
  if (!(x > 0.0 && x < 1.0)) {
    std::ostringstream msg;
    msg << name << " = " << x << " is outside (0, 1)";
    throw BarrierDomainError(msg.str());
  }
}

void check_step(const StepProblem& p) {
  const int n = p.params.species_count();
  if (p.next.species_count() != n || p.previous.species_count() != n ||
      p.next.psi.size() != n || p.previous.psi.size() != n) {
    throw DimensionError("step states do not match the species count");
  }
  if (!(p.dt > 0.0)) {
    throw std::invalid_argument("time step must be positive");
  }
  require_interior(p.next.phi0, "phi0");
  for (int i = 0; i < n; ++i) {
    require_interior(p.next.phi(i), "phi");
    require_interior(p.next.psi(i), "psi");
  }
}

// Discrete rates of one step.
struct Rates {
  double phi0;
  Vector phi;
  Vector psi;
};

Rates rates_of(const StepProblem& p) {
  return {(p.next.phi0 - p.previous.phi0) / p.dt, (p.next.phi - p.previous.phi) / p.dt,
          (p.next.psi - p.previous.psi) / p.dt};
}

}  // namespace

ModelParams::ModelParams(Matrix growth, Vector sensitivity, Vector viscosity,
                         double empty_viscosity, double barrier_scale, bool psi_multiplier)
    : growth_(std::move(growth)),
      sensitivity_(std::move(sensitivity)),
      viscosity_(std::move(viscosity)),
      empty_viscosity_(empty_viscosity),
      barrier_scale_(barrier_scale),
      psi_multiplier_(psi_multiplier) {
  const auto n = viscosity_.size();
  if (n < 1) throw ParameterError("species count must be positive");
  if (growth_.rows() != n || growth_.cols() != n || sensitivity_.size() != n) {
    throw DimensionError("growth matrix and sensitivity vector must match the species count");
  }
  if (growth_ != growth_.transpose()) {
    throw ParameterError("growth matrix must be symmetric");
  }
  if (!growth_.allFinite() || !sensitivity_.allFinite()) {
    throw ParameterError("growth and sensitivity entries must be finite");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(viscosity_(i) > 0.0) || !std::isfinite(viscosity_(i))) {
      throw ParameterError("species viscosities must be positive");
    }
  }
  if (!(empty_viscosity_ > 0.0) || !std::isfinite(empty_viscosity_)) {
    throw ParameterError("empty-space viscosity must be positive");
  }
  if (!(barrier_scale_ > 0.0) || !std::isfinite(barrier_scale_)) {
    throw ParameterError("barrier scale must be positive");
  }
}

bool ModelParams::operator==(const ModelParams& other) const {
  return identical(growth_, other.growth_) && identical(sensitivity_, other.sensitivity_) &&
         identical(viscosity_, other.viscosity_) && empty_viscosity_ == other.empty_viscosity_ &&
         barrier_scale_ == other.barrier_scale_ && psi_multiplier_ == other.psi_multiplier_;
}

bool SimState::operator==(const SimState& other) const {
  return t == other.t && phi0 == other.phi0 && identical(phi, other.phi) && identical(psi, other.psi) &&
         gamma == other.gamma;
}

Vector pack(const SimState& state) {
  const int n = state.species_count();
  Vector u(2 * n + 2);
  u(phi0_index()) = state.phi0;
  u.segment(1, n) = state.phi;
  u.segment(1 + n, n) = state.psi;
  u(gamma_index(n)) = state.gamma;
  return u;
}

SimState unpack(const Vector& unknowns, double t) {
  if (unknowns.size() < 4 || unknowns.size() % 2 != 0) {
    throw DimensionError("unknown vector must have length 2n + 2");
  }
  const int n = static_cast<int>(unknowns.size() / 2 - 1);
  SimState s;
  s.t = t;
  s.phi0 = unknowns(phi0_index());
  s.phi = unknowns.segment(1, n);
  s.psi = unknowns.segment(1 + n, n);
  s.gamma = unknowns(gamma_index(n));
  return s;
}

SimState initial_state(const Vector& phi, const Vector& psi) {
  require_same_size(phi, psi, "initial_state");
  constexpr double inset = 1e-9;
  auto clamp = [](double x) {
    if (x <= 0.0) return inset;
    if (x >= 1.0) return 1.0 - inset;
    return x;
  };
  SimState s;
  s.t = 0.0;
  s.phi = phi.unaryExpr(clamp);
  s.psi = psi.unaryExpr(clamp);
  s.phi0 = clamp(1.0 - s.phi.sum());
  s.gamma = 0.0;
  return s;
}

Vector living_fractions(const Vector& phi, const Vector& psi) {
  require_same_size(phi, psi, "living_fractions");
  return phi.cwiseProduct(psi);
}

Vector dead_fractions(const Vector& phi, const Vector& psi) {
  require_same_size(phi, psi, "dead_fractions");
  return phi.cwiseProduct((1.0 - psi.array()).matrix());
}

double free_energy_density(const SimState& state, const ModelParams& params,
                           double nutrient, double antibiotic) {
  if (state.species_count() != params.species_count()) {
    throw DimensionError("state does not match the species count");
  }
  const Vector phibar = living_fractions(state.phi, state.psi);
  const double growth = phibar.dot(params.growth() * phibar);
  const double kill = state.psi.dot(params.sensitivity().cwiseProduct(state.psi));
  return -0.5 * nutrient * growth + 0.5 * antibiotic * kill;
}

Vector interaction_drive(const Vector& phibar, const Matrix& growth) {
  if (growth.rows() != phibar.size() || growth.cols() != phibar.size()) {
    throw DimensionError("interaction_drive: growth matrix does not match phibar");
  }
  return growth * phibar;
}

double barrier_force(double x, double penalty) {
  require_interior(x, "barrier argument");
  return penalty * (1.0 / (1.0 - x) - 1.0 / x);
}

double barrier_curvature(double x, double penalty) {
  require_interior(x, "barrier argument");
  return penalty * (1.0 / ((1.0 - x) * (1.0 - x)) + 1.0 / (x * x));
}

double dissipation_rate(const SimState& state, double phi0_rate, const Vector& phi_rates,
                        const Vector& psi_rates, const ModelParams& params) {
  const int n = params.species_count();
  if (state.species_count() != n || state.psi.size() != n || phi_rates.size() != n ||
      psi_rates.size() != n) {
    throw DimensionError("dissipation_rate: sizes do not match the species count");
  }
  double power = params.empty_viscosity() * phi0_rate * phi0_rate;
  for (int i = 0; i < n; ++i) {
    const double living_rate = phi_rates(i) * state.psi(i) + state.phi(i) * psi_rates(i);
    power += params.viscosity()(i) * (living_rate * living_rate + phi_rates(i) * phi_rates(i));
  }
  return power;
}

Vector residual(const StepProblem& p) {
  check_step(p);
  const int n = p.params.species_count();
  const auto& s = p.next;
  const Rates r = rates_of(p);
  const Vector drive = interaction_drive(living_fractions(s.phi, s.psi), p.params.growth());
  const double c = p.nutrient;
  const double psi_gamma = p.params.psi_multiplier() ? s.gamma : 0.0;

  Vector R(2 * n + 2);
  R(phi0_index()) = p.params.empty_viscosity() * r.phi0 + s.gamma +
                    barrier_force(s.phi0, p.params.empty_penalty());
  for (int i = 0; i < n; ++i) {
    const double eta = p.params.viscosity()(i);
    const double K = p.params.penalty(i);
    const double phi = s.phi(i);
    const double psi = s.psi(i);
    R(phi_index(i)) = -c * psi * drive(i) +
                      eta * (r.phi(i) * psi * psi + phi * psi * r.psi(i) + r.phi(i)) + s.gamma +
                      barrier_force(phi, K);
    R(psi_index(n, i)) = -c * phi * drive(i) + p.antibiotic * p.params.sensitivity()(i) * psi +
                         eta * (r.psi(i) * phi * phi + phi * psi * r.phi(i)) + psi_gamma +
                         barrier_force(psi, K);
  }
  R(gamma_index(n)) = s.constraint_violation();
  return R;
}

Vector residual_scale(const StepProblem& p) {
  check_step(p);
  const int n = p.params.species_count();
  const auto& s = p.next;
  const Rates r = rates_of(p);
  const Vector drive = interaction_drive(living_fractions(s.phi, s.psi), p.params.growth());
  const double c = std::abs(p.nutrient);
  const double g = std::abs(s.gamma);

  Vector scale = Vector::Ones(2 * n + 2);
  scale(phi0_index()) += p.params.empty_viscosity() * std::abs(r.phi0) + g +
                         std::abs(barrier_force(s.phi0, p.params.empty_penalty()));
  for (int i = 0; i < n; ++i) {
    const double eta = p.params.viscosity()(i);
    const double K = p.params.penalty(i);
    const double phi = s.phi(i);
    const double psi = s.psi(i);
    scale(phi_index(i)) +=
        c * psi * std::abs(drive(i)) +
        eta * (std::abs(r.phi(i)) * psi * psi + phi * psi * std::abs(r.psi(i)) + std::abs(r.phi(i))) +
        g + std::abs(barrier_force(phi, K));
    scale(psi_index(n, i)) +=
        c * phi * std::abs(drive(i)) + std::abs(p.antibiotic * p.params.sensitivity()(i)) * psi +
        eta * (std::abs(r.psi(i)) * phi * phi + phi * psi * std::abs(r.phi(i))) +
        (p.params.psi_multiplier() ? g : 0.0) + std::abs(barrier_force(psi, K));
  }
  return scale;
}

Matrix jacobian(const StepProblem& p) {
  check_step(p);
  const int n = p.params.species_count();
  const auto& s = p.next;
  const Rates r = rates_of(p);
  const Matrix& A = p.params.growth();
  const Vector drive = interaction_drive(living_fractions(s.phi, s.psi), A);
  const double c = p.nutrient;
  const double inv_dt = 1.0 / p.dt;

  Matrix J = Matrix::Zero(2 * n + 2, 2 * n + 2);
  J(phi0_index(), phi0_index()) =
      p.params.empty_viscosity() * inv_dt + barrier_curvature(s.phi0, p.params.empty_penalty());
  J(phi0_index(), gamma_index(n)) = 1.0;

  for (int i = 0; i < n; ++i) {
    const int pi = phi_index(i);
    const int si = psi_index(n, i);
    const double eta = p.params.viscosity()(i);
    const double K = p.params.penalty(i);
    const double phi = s.phi(i);
    const double psi = s.psi(i);

    // Interaction terms: d(A phibar)_i / d phi_j = A_ij psi_j, / d psi_j = A_ij phi_j.
    for (int j = 0; j < n; ++j) {
      J(pi, phi_index(j)) = -c * psi * A(i, j) * s.psi(j);
      J(pi, psi_index(n, j)) = -c * psi * A(i, j) * s.phi(j);
      J(si, phi_index(j)) = -c * phi * A(i, j) * s.psi(j);
      J(si, psi_index(n, j)) = -c * phi * A(i, j) * s.phi(j);
    }
    J(pi, si) += -c * drive(i);
    J(si, pi) += -c * drive(i);

    J(pi, pi) += eta * (psi * psi * inv_dt + psi * r.psi(i) + inv_dt) + barrier_curvature(phi, K);
    J(pi, si) += eta * (2.0 * r.phi(i) * psi + phi * r.psi(i) + phi * psi * inv_dt);
    J(si, pi) += eta * (2.0 * r.psi(i) * phi + psi * r.phi(i) + phi * psi * inv_dt);
    J(si, si) += p.antibiotic * p.params.sensitivity()(i) +
                 eta * (phi * phi * inv_dt + phi * r.phi(i)) + barrier_curvature(psi, K);

    J(pi, gamma_index(n)) = 1.0;
    J(si, gamma_index(n)) = p.params.psi_multiplier() ? 1.0 : 0.0;
  }
  for (int j = 0; j <= n; ++j) J(gamma_index(n), j) = 1.0;
  return J;
}

}  // namespace biofilm

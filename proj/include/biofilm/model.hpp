#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace biofilm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Exact element-wise equality that tolerates differing shapes.
template <class A, class B>
bool identical(const Eigen::DenseBase<A>& a, const Eigen::DenseBase<B>& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.derived().array() == b.derived().array()).all();
}

/// Raised when vector/matrix sizes disagree with the species count.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a bounded fraction leaves the open interval (0, 1), i.e. the
/// logarithmic barrier is undefined. Callers treat this as a failed trial step.
class BarrierDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised for parameter sets that violate the model invariants.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Material parameters of an n-species material point.
///
/// The growth matrix is symmetric (checked exactly), the antibiotic
/// sensitivity matrix is diagonal and therefore stored as a vector, and every
/// viscosity is strictly positive. Barrier penalties are derived from the
/// viscosities: K_i = eta_i * barrier_scale, K_0 = eta0 * barrier_scale.
class ModelParams {
 public:
  ModelParams(Matrix growth, Vector sensitivity, Vector viscosity,
              double empty_viscosity = 1.0, double barrier_scale = 1e-4,
              bool psi_multiplier = false);

  int species_count() const { return static_cast<int>(viscosity_.size()); }
  const Matrix& growth() const { return growth_; }
  const Vector& sensitivity() const { return sensitivity_; }
  const Vector& viscosity() const { return viscosity_; }
  double empty_viscosity() const { return empty_viscosity_; }
  double barrier_scale() const { return barrier_scale_; }

  /// When true, the multiplier also enters the living-fraction rows exactly as
  /// the printed evolution equations state. Off by default: that system loses
  /// solvability once the living fractions press on their upper bound.
  bool psi_multiplier() const { return psi_multiplier_; }

  double penalty(int i) const { return viscosity_(i) * barrier_scale_; }
  double empty_penalty() const { return empty_viscosity_ * barrier_scale_; }

  /// Number of unknowns of the discrete system, 2n + 2.
  int unknown_count() const { return 2 * species_count() + 2; }

  bool operator==(const ModelParams& other) const;

 private:
  Matrix growth_;
  Vector sensitivity_;
  Vector viscosity_;
  double empty_viscosity_;
  double barrier_scale_;
  bool psi_multiplier_;
};

/// One solution point of the constrained system.
struct SimState {
  double t = 0.0;
  double phi0 = 1.0;  // empty space
  Vector phi;         // volume fractions
  Vector psi;         // living shares
  double gamma = 0.0; // multiplier of the volume constraint

  int species_count() const { return static_cast<int>(phi.size()); }
  double constraint_violation() const { return phi0 + phi.sum() - 1.0; }

  bool operator==(const SimState& other) const;
};

// Unknown/residual ordering shared by residual() and jacobian():
//   [0]            phi0
//   [1 .. n]       phi_1 .. phi_n
//   [n+1 .. 2n]    psi_1 .. psi_n
//   [2n+1]         gamma
inline int phi0_index() { return 0; }
inline int phi_index(int i) { return 1 + i; }
inline int psi_index(int n, int i) { return 1 + n + i; }
inline int gamma_index(int n) { return 2 * n + 1; }

Vector pack(const SimState& state);
SimState unpack(const Vector& unknowns, double t);

/// Builds the state at t = 0 from initial volume fractions and living shares.
/// Fractions of exactly 0 or 1 are moved inward by 1e-9, and phi0 closes the
/// volume constraint exactly.
SimState initial_state(const Vector& phi, const Vector& psi);

Vector living_fractions(const Vector& phi, const Vector& psi);
Vector dead_fractions(const Vector& phi, const Vector& psi);

/// Helmholtz free energy density
///   -1/2 c phibar.A.phibar + 1/2 alpha psi.diag(b).psi
double free_energy_density(const SimState& state, const ModelParams& params,
                           double nutrient, double antibiotic);

/// A * phibar.
Vector interaction_drive(const Vector& phibar, const Matrix& growth);

/// Derivative of -K [ln x + ln(1 - x)].
double barrier_force(double x, double penalty);
/// Second derivative of the same potential.
double barrier_curvature(double x, double penalty);

/// Twice the dissipation function, i.e. the dissipated power
///   phibar_dot.eta.phibar_dot + phi_dot.eta.phi_dot + eta0 phi0_dot^2
/// with phibar_dot_i = phi_dot_i psi_i + phi_i psi_dot_i.
double dissipation_rate(const SimState& state, double phi0_rate,
                        const Vector& phi_rates, const Vector& psi_rates,
                        const ModelParams& params);

/// Inputs of one backward Euler step; all state-dependent terms are evaluated
/// at `next`.
struct StepProblem {
  const SimState& next;
  const SimState& previous;
  double dt;
  const ModelParams& params;
  double nutrient;
  double antibiotic;
};

/// Discrete evolution equations, ordered as documented above.
Vector residual(const StepProblem& problem);

/// Per-row sum of absolute term magnitudes plus one. Dividing the residual by
/// it gives the scaled residual used as the Newton convergence measure.
Vector residual_scale(const StepProblem& problem);

/// Analytic d residual / d unknowns.
Matrix jacobian(const StepProblem& problem);

}  // namespace biofilm

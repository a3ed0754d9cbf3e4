#include "biofilm/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace biofilm {

namespace {

std::string with_line(const std::string& message, int line) {
  if (line <= 0) return message;
  std::ostringstream os;
  os << "line " << line << ": " << message;
  return os.str();
}

}  // namespace

std::string to_string(ConfigErrorCode code) {
  switch (code) {
    case ConfigErrorCode::Syntax: return "syntax";
    case ConfigErrorCode::MissingKey: return "missing-key";
    case ConfigErrorCode::InvalidValue: return "invalid-value";
    case ConfigErrorCode::DimensionMismatch: return "dimension-mismatch";
    case ConfigErrorCode::AsymmetricGrowth: return "asymmetric-growth";
    case ConfigErrorCode::NonPositiveViscosity: return "non-positive-viscosity";
    case ConfigErrorCode::InitialFractionSum: return "initial-fraction-sum";
    case ConfigErrorCode::FractionOutOfRange: return "fraction-out-of-range";
    case ConfigErrorCode::InvalidSolverSetting: return "invalid-solver-setting";
    case ConfigErrorCode::UnknownPreset: return "unknown-preset";
    case ConfigErrorCode::UnknownKey: return "unknown-key";
  }
  return "unknown";
}

ConfigError::ConfigError(ConfigErrorCode code, const std::string& message, int line)
    : std::runtime_error(with_line(message, line)), code_(code), line_(line) {}

void SolverSettings::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
  if (!(residual_tolerance > 0.0)) fail("residual_tolerance must be positive");
  if (max_newton_iterations < 1) fail("max_newton_iterations must be at least 1");
  if (max_halvings < 1) fail("max_halvings must be at least 1");
  if (!(dt > 0.0) || !std::isfinite(dt)) fail("dt must be positive");
  if (steps < 0) fail("steps must be non-negative");
  if (!(steady_state_tolerance >= 0.0)) fail("steady_state_tolerance must be non-negative");
  if (max_substep_depth < 0) fail("max_substep_depth must be non-negative");
}

void ScenarioConfig::validate() const {
  const int n = params.species_count();
  if (initial_phi.size() != n || initial_psi.size() != n) {
    throw ConfigError(ConfigErrorCode::DimensionMismatch,
                      "initial fractions must have one entry per species");
  }
  for (int i = 0; i < n; ++i) {
    if (!(initial_phi(i) >= 0.0 && initial_phi(i) <= 1.0) ||
        !(initial_psi(i) >= 0.0 && initial_psi(i) <= 1.0)) {
      throw ConfigError(ConfigErrorCode::FractionOutOfRange,
                        "initial fractions must lie in [0, 1]");
    }
  }
  if (!(initial_phi.sum() < 1.0)) {
    throw ConfigError(ConfigErrorCode::InitialFractionSum,
                      "initial volume fractions must sum to less than 1");
  }
  try {
    solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(ConfigErrorCode::InvalidSolverSetting, e.what());
  }
  if (output.stride < 1) {
    throw ConfigError(ConfigErrorCode::InvalidValue, "output stride must be at least 1");
  }
}

bool ScenarioConfig::operator==(const ScenarioConfig& other) const {
  return name == other.name && description == other.description && params == other.params &&
         identical(initial_phi, other.initial_phi) && identical(initial_psi, other.initial_psi) &&
         nutrient == other.nutrient && antibiotic == other.antibiotic && solver == other.solver &&
         output == other.output;
}

ScenarioConfig relabel_species(const ScenarioConfig& config, const std::vector<int>& perm) {
  const ModelParams& p = config.params;
  const int n = p.species_count();
  if (static_cast<int>(perm.size()) != n) throw DimensionError("permutation has the wrong length");
  std::vector<int> seen(n, 0);
  for (int k : perm) {
    if (k < 0 || k >= n || seen[k]++) throw std::invalid_argument("not a permutation");
  }
  Matrix A(n, n);
  Vector b(n), eta(n), phi(n), psi(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) A(i, j) = p.growth()(perm[i], perm[j]);
    b(i) = p.sensitivity()(perm[i]);
    eta(i) = p.viscosity()(perm[i]);
    phi(i) = config.initial_phi(perm[i]);
    psi(i) = config.initial_psi(perm[i]);
  }
  ScenarioConfig out = config;
  out.params = ModelParams(A, b, eta, p.empty_viscosity(), p.barrier_scale(), p.psi_multiplier());
  out.initial_phi = phi;
  out.initial_psi = psi;
  return out;
}

std::vector<int> canonical_species_order(const ScenarioConfig& config) {
  const ModelParams& p = config.params;
  const int n = p.species_count();
  std::vector<std::vector<double>> keys(n);
  for (int i = 0; i < n; ++i) {
    std::vector<double> others;
    for (int j = 0; j < n; ++j) {
      if (j != i) others.push_back(p.growth()(i, j));
    }
    std::sort(others.begin(), others.end());
    keys[i] = {config.initial_phi(i), config.initial_psi(i), p.viscosity()(i),
               p.sensitivity()(i), p.growth()(i, i)};
    keys[i].insert(keys[i].end(), others.begin(), others.end());
  }
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return keys[a] < keys[b]; });
  return order;
}

}  // namespace biofilm

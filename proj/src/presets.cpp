#include "biofilm/presets.hpp"


namespace biofilm {

namespace {

// Two-species table: nutrients 100, antibiotics 10, both constant.
struct TwoSpecies {
  const char* name;
  const char* description;
  double a11, a12, a22;
  double b1, b2;
  double eta1, eta2;
  double phi1, phi2;
  long steps;
};

constexpr TwoSpecies kTwoSpecies[] = {
    {"two-1", "growth a11 > a22, space-limited competition only", 2, 0, 1, 0, 0, 1, 1, 0.2, 0.2, 1000},
    {"two-2", "equal growth, species 2 twice as viscous", 1, 0, 1, 0, 0, 1, 2, 0.2, 0.2, 1500},
    {"two-3", "protocooperation a12 = 1", 1, 1, 1, 0, 0, 1, 2, 0.2, 0.2, 1500},
    {"two-4", "antibiotic sensitive, species 2 starts larger", 1, 0, 1, 1, 2, 1, 2, 0.2, 0.3, 1500},
    {"two-5", "antibiotic sensitive, closer initial fractions", 1, 0, 1, 1, 2, 1, 2, 0.25, 0.3, 1500},
    {"two-6", "competition a12 = -1", 1, -1, 1, 0, 0, 1, 2, 0.2, 0.2, 1500},
    {"two-4s", "two-4 with switched viscosities", 1, 0, 1, 1, 2, 2, 1, 0.2, 0.3, 1500},
    {"two-5s", "two-5 with switched viscosities", 1, 0, 1, 1, 2, 2, 1, 0.25, 0.3, 1500},
    {"two-4ss", "two-4 with equal viscosities", 1, 0, 1, 1, 2, 1, 1, 0.2, 0.3, 1500},
    {"two-5ss", "two-5 with equal viscosities", 1, 0, 1, 1, 2, 1, 1, 0.25, 0.3, 1500},
};

ScenarioConfig two_species(const TwoSpecies& p) {
  Matrix A(2, 2);
  A << p.a11, p.a12, p.a12, p.a22;
  Vector b(2);
  b << p.b1, p.b2;
  Vector eta(2);
  eta << p.eta1, p.eta2;
  Vector phi(2);
  phi << p.phi1, p.phi2;

  ScenarioConfig config{p.name,          p.description,
                        ModelParams(A, b, eta),
                        phi,             Vector::Ones(2),
                        ForcingSignal::constant(100.0),
                        ForcingSignal::constant(10.0),
                        {},              {}};
  config.solver.steps = p.steps;
  return config;
}

ScenarioConfig four_species(const char* name, const char* description, const Vector& b,
                            const Vector& phi, ForcingSignal nutrient, ForcingSignal antibiotic) {
  Matrix A(4, 4);
  A << 1, 5, 5, 5,
       5, 1, 3, 3,
       5, 3, 1, 2,
       5, 3, 2, 1;
  A *= 0.5;
  Vector eta(4);
  eta << 0.8, 1.0, 1.5, 2.0;
  ScenarioConfig config{name,  description, ModelParams(A, b, eta), phi, Vector::Ones(4),
                        std::move(nutrient), std::move(antibiotic), {}, {}};
  config.solver.steps = 1500;
  return config;
}

Vector vec4(double a, double b, double c, double d) {
  Vector v(4);
  v << a, b, c, d;
  return v;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& p : kTwoSpecies) out.emplace_back(p.name);
    for (const char* n : {"four-1", "four-2", "four-3", "four-4"}) out.emplace_back(n);
    return out;
  }();
  return names;
}

std::string preset_description(const std::string& name) { return preset(name).description; }

ScenarioConfig preset(const std::string& name) {
  for (const auto& p : kTwoSpecies) {
    if (name == p.name) return two_species(p);
  }
  const Vector mild = vec4(0.4, 0.3, 0.2, 0.1);
  const Vector even = vec4(0.02, 0.02, 0.02, 0.02);
  if (name == "four-1") {
    return four_species("four-1", "four species, equal initial fractions", mild, even,
                        ForcingSignal::constant(100.0), ForcingSignal::constant(10.0));
  }
  if (name == "four-2") {
    return four_species("four-2", "four species, species 4 head start", mild,
                        vec4(0.02, 0.02, 0.02, 0.2), ForcingSignal::constant(100.0),
                        ForcingSignal::constant(10.0));
  }
  if (name == "four-3") {
    return four_species("four-3", "four species, sinusoidal nutrients 50 + 50 sin(500 t)", mild,
                        even, ForcingSignal::Sinusoid{50.0, 50.0, 500.0, TimeBasis::Time},
                        ForcingSignal::constant(10.0));
  }
  if (name == "four-4") {
    return four_species("four-4", "four species, antibiotic pulse 0 -> 100 after step 500",
                        vec4(10.0, 2.0, 1.0, 0.01), even, ForcingSignal::constant(100.0),
                        ForcingSignal::Step{500.0, 0.0, 100.0, TimeBasis::StepIndex});
  }
  std::string valid;
  for (const auto& n : preset_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw ConfigError(ConfigErrorCode::UnknownPreset,
                    "unknown preset '" + name + "'; valid presets: " + valid);
}

}  // namespace biofilm

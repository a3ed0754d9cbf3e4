#include "biofilm/presets.hpp"
#include "biofilm/verification.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <set>
#include <sstream>

using namespace biofilm;

namespace {

int failures = 0;

void verdict(int criterion, const std::vector<CheckReport>& reports) {
  bool passed = true;
  for (const auto& r : reports) passed = passed && r.passed;
  if (!passed) ++failures;
  std::cout << "criterion " << criterion << ": " << (passed ? "PASS" : "FAIL") << '\n';
  const bool itemize = reports.size() <= 12;
  int count = 0;
  for (const auto& r : reports) {
    count += r.passed ? 1 : 0;
    if (!r.passed || itemize) std::cout << "    " << summary_line(r) << '\n';
  }
  if (!itemize) std::cout << "    " << count << " of " << reports.size() << " checks passed\n";
  std::cout.flush();
}

std::vector<CheckReport> property_checks(const ScenarioConfig& config) {
  std::vector<CheckReport> out;
  out.push_back(check_trajectory_properties(run(config), config));
  out.push_back(check_determinism(config));
  std::vector<int> reversed(config.params.species_count());
  for (int i = 0; i < static_cast<int>(reversed.size()); ++i) {
    reversed[i] = static_cast<int>(reversed.size()) - 1 - i;
  }
  out.push_back(check_permutation(config, reversed));
  return out;
}

}  // namespace

int main() {
  const std::vector<CheckReport> figures = figure_checks();
  const auto pick = [&](std::initializer_list<int> idx) {
    std::vector<CheckReport> out;
    for (int i : idx) out.push_back(figures.at(i));
    return out;
  };
  verdict(1, pick({0, 1}));
  verdict(2, pick({2, 3}));
  verdict(3, pick({4}));
  verdict(4, pick({5, 6}));
  verdict(5, pick({7, 8}));
  verdict(6, pick({9, 10}));
  verdict(7, pick({11}));
  verdict(8, pick({12, 13}));

  {
    std::vector<CheckReport> reports;
    for (const auto& name : preset_names()) {
      for (auto& r : property_checks(preset(name))) reports.push_back(std::move(r));
    }
    for (int k = 0; k < 50; ++k) {
      for (auto& r : property_checks(random_config(default_seed + 1 + k))) {
        reports.push_back(std::move(r));
      }
    }
    verdict(9, reports);
  }

  {
    std::vector<CheckReport> reports;
    std::mt19937_64 rng(default_seed);
    for (int n : {1, 2, 4}) {
      const ModelParams params = random_params(n, rng);
      reports.push_back(check_energy_gradient(params, 100));
      reports.push_back(check_dissipation_gradient(params, 100));
      reports.push_back(check_jacobian(params, 50));
    }
    const ScenarioConfig two1 = preset("two-1");
    const Trajectory be = run(two1);
    const Trajectory ref = reference_trajectory(two1, 100);
    const double gap = trajectory_discrepancy(be, ref);
    reports.push_back({"two-1 backward Euler vs reference (<= 1e-3)", be.ok() && ref.ok() && gap <= 1e-3,
                       gap, ref.ok() ? "dt=1e-4" : ref.failure_message, 0});
    const ConvergenceStudy study = convergence_study(two1, {1e-3, 5e-4, 2.5e-4});
    double worst = 0.0;
    std::ostringstream orders;
    for (double o : study.orders) {
      worst = std::max(worst, std::isfinite(o) ? std::abs(o - 1.0) : INFINITY);
      orders << o << ' ';
    }
    reports.push_back({"two-1 convergence order within 1 +- 0.3", worst <= 0.3, worst,
                       "orders " + orders.str(), 0});
    verdict(10, reports);
  }

  {
    std::vector<CheckReport> reports;
    for (const char* name : {"two-4s", "two-5s", "two-4ss", "two-5ss"}) {
      const ScenarioConfig c = preset(name);
      const Trajectory t = run(c);
      reports.push_back({std::string(name) + " completes",
                         t.termination == Termination::Completed, 0.0, to_string(t.termination), 0});
      for (auto& r : property_checks(c)) reports.push_back(std::move(r));
    }
    for (const char* name : {"two-4ss", "two-5ss"}) {
      reports.push_back(check_permutation(preset(name), {1, 0}));
    }
    verdict(11, reports);
  }

  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail")
            << '\n';
  return failures == 0 ? 0 : 1;
}

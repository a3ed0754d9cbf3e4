#include "biofilm/presets.hpp"
#include "biofilm/verification.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace biofilm;

TEST_SUITE("verification") {

TEST_CASE("finite-difference oracles pass on random parameters") {
  std::mt19937_64 rng(7);
  for (int n : {1, 2, 4}) {
    CAPTURE(n);
    const ModelParams params = random_params(n, rng);
    for (const CheckReport& r : {check_energy_gradient(params, 20),
                                 check_dissipation_gradient(params, 20),
                                 check_jacobian(params, 10)}) {
      CAPTURE(r.name);
      CAPTURE(r.location);
      CHECK(r.passed);
      CHECK(r.worst_error <= fd_tolerance);
    }
  }
}

TEST_CASE("jacobian oracle covers the multiplier in the living-fraction rows") {
  const ModelParams base = preset("two-1").params;
  const ModelParams printed(base.growth(), base.sensitivity(), base.viscosity(),
                            base.empty_viscosity(), base.barrier_scale(), true);
  const CheckReport r = check_jacobian(printed, 10);
  CAPTURE(r.location);
  CHECK(r.passed);
}

TEST_CASE("energy oracle without forcing") {
  const CheckReport r = check_energy_gradient(preset("four-1").params, 20, 0.0, 0.0);
  CHECK(r.passed);
}

TEST_CASE("seeded reports are reproducible") {
  const ModelParams params = preset("two-3").params;
  const CheckReport a = check_jacobian(params, 5, 42);
  const CheckReport b = check_jacobian(params, 5, 42);
  CHECK(a.worst_error == b.worst_error);
  CHECK(a.location == b.location);
  CHECK(a.seed == 42);
  CHECK(random_config(99) == random_config(99));
}

TEST_CASE("summary line and report file") {
  const CheckReport r{"demo check", true, 0.5, "sample 3", 11};
  const std::string line = summary_line(r);
  CHECK(line.rfind("PASS demo check", 0) == 0);
  CHECK(line.find("sample 3") != std::string::npos);
  CHECK(summary_line({"x", false, 1.0, "", 0}).rfind("FAIL x", 0) == 0);

  const auto path = std::filesystem::temp_directory_path() / "biofilm_reports.csv";
  write_reports({r}, path.string());
  std::ifstream in(path);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "name,passed,worst_error,location,seed");
  CHECK(row.rfind("demo check,1,0.5,", 0) == 0);
  std::filesystem::remove(path);
}

TEST_CASE("relabelling") {
  const ScenarioConfig c = preset("four-2");
  const ScenarioConfig r = relabel_species(c, {3, 2, 1, 0});
  CHECK(r.initial_phi(0) == c.initial_phi(3));
  CHECK(r.params.growth()(0, 1) == c.params.growth()(3, 2));
  CHECK(relabel_species(r, {3, 2, 1, 0}) == c);
  CHECK_THROWS(relabel_species(c, {0, 0, 1, 2}));
  CHECK_THROWS(relabel_species(c, {0, 1}));

  const std::vector<int> order = canonical_species_order(c);
  const std::vector<int> swapped_order = canonical_species_order(r);
  for (int i = 0; i < 4; ++i) CHECK(3 - swapped_order[i] == order[i]);
}

TEST_CASE("properties, determinism and permutation on a preset") {
  const ScenarioConfig c = preset("two-5ss");
  CHECK(check_trajectory_properties(run(c), c).passed);
  CHECK(check_determinism(c).passed);
  const CheckReport p = check_permutation(c, {1, 0});
  CHECK(p.passed);
  CHECK(p.worst_error == 0.0);
}

TEST_CASE("property check flags a broken trajectory") {
  const ScenarioConfig c = preset("two-1");
  Trajectory t = run(c);
  t.points[10].state.phi(0) += 1e-6;
  CHECK_FALSE(check_trajectory_properties(t, c).passed);
}

TEST_CASE("random configs complete") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ScenarioConfig c = random_config(seed);
    CHECK_NOTHROW(c.validate());
    CHECK(run(c).ok());
  }
}

TEST_CASE("reference integrator tracks backward Euler on a short run") {
  ScenarioConfig c = preset("two-3");
  c.solver.steps = 50;
  const Trajectory ref = reference_trajectory(c, 10);
  REQUIRE(ref.ok());
  CHECK(ref.points.size() == 51);
  for (const auto& p : ref.points) {
    CHECK(std::abs(p.state.phi0 + p.state.phi.sum() - 1.0) <= 1e-8);
  }
  CHECK(trajectory_discrepancy(run(c), ref) < 1e-3);
  CHECK(trajectory_discrepancy(ref, ref) == 0.0);
  CHECK_THROWS(reference_trajectory(c, 2));
}

}  // TEST_SUITE

#include "biofilm/csv.hpp"
#include "biofilm/presets.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace biofilm;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_SUITE("csv") {

TEST_CASE("header column order") {
  CHECK(csv_header(2) ==
        "step,t,phi0,phi_1,phi_2,psi_1,psi_2,phibar_1,phibar_2,gamma,nutrient,antibiotic,"
        "dissipation,newton_iterations,residual_norm");
}

TEST_CASE("zero steps gives header plus the initial row") {
  ScenarioConfig c = preset("two-1");
  c.solver.steps = 0;
  std::ostringstream out;
  write_trajectory(run(c), 1, out);
  const auto lines = lines_of(out.str());
  REQUIRE(lines.size() == 2);
  CHECK(lines[1] ==
        "0,0,0.59999999999999998,0.20000000000000001,0.20000000000000001,0.99999999900000003,"
        "0.99999999900000003,0.19999999980000002,0.19999999980000002,0,100,10,0,0,0");
  CHECK(out.str().back() == '\n');
}

TEST_CASE("stride thinning") {
  const Trajectory t = run(preset("two-2"));
  std::ostringstream out;
  write_trajectory(t, 10, out);
  const auto lines = lines_of(out.str());
  REQUIRE(lines.size() == 152);
  CHECK(lines[1].rfind("0,", 0) == 0);
  CHECK(lines[2].rfind("10,", 0) == 0);
  CHECK(lines.back().rfind("1500,", 0) == 0);

  std::ostringstream odd;
  write_trajectory(t, 7, odd);
  const auto odd_lines = lines_of(odd.str());
  CHECK(odd_lines.size() == 1 + 215 + 1);  // steps 0..1498 by 7, plus the last
  CHECK(odd_lines.back().rfind("1500,", 0) == 0);

  CHECK_THROWS_AS(write_trajectory(t, 0, out), std::invalid_argument);
}

TEST_CASE("every row has every column") {
  std::ostringstream out;
  ScenarioConfig c = preset("four-4");
  c.solver.steps = 20;
  write_trajectory(run(c), 1, out);
  const auto lines = lines_of(out.str());
  const auto commas = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
  for (const auto& line : lines) CHECK(commas(line) == commas(lines.front()));
  CHECK(commas(lines.front()) == 3 + 3 * 4 + 6 - 1);
}

TEST_CASE("files are byte-identical across rewrites") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto a = dir / "biofilm_csv_a.csv";
  const auto b = dir / "biofilm_csv_b.csv";
  const Trajectory t = run(preset("two-3"));
  write_trajectory(t, 1, a.string());
  write_trajectory(t, 1, b.string());
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).back() == '\n');
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST_CASE("unwritable destination names the path and the cause") {
  ScenarioConfig c = preset("two-1");
  c.solver.steps = 0;
  const std::string path = "/nonexistent-dir/out.csv";
  try {
    write_trajectory(run(c), 1, path);
    FAIL("expected OutputError");
  } catch (const OutputError& e) {
    const std::string what = e.what();
    CHECK(what.find(path) != std::string::npos);
    CHECK(what.find("No such file or directory") != std::string::npos);
  }
}

}  // TEST_SUITE

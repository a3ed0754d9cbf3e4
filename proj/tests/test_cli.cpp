#include "biofilm/cli.hpp"
#include "biofilm/config_format.hpp"
#include "biofilm/presets.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace biofilm;

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int status = run_cli(args, out, err);
  return {status, out.str(), err.str()};
}

std::filesystem::path temp(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

std::size_t line_count(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("run a preset") {
  const auto path = temp("biofilm_cli_two1.csv");
  std::filesystem::remove(path);
  const Result r = cli({"run", "--preset", "two-1", "--out", path.string()});
  CHECK(r.status == exit_ok);
  CHECK(r.err.empty());
  CHECK(r.out.find("completed") != std::string::npos);
  REQUIRE(std::filesystem::exists(path));
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  CHECK(line_count(buffer.str()) == 1 + 1001);
  std::filesystem::remove(path);
}

TEST_CASE("list-presets prints fourteen lines") {
  const Result r = cli({"list-presets"});
  CHECK(r.status == exit_ok);
  CHECK(line_count(r.out) == 14);
  CHECK(r.out.rfind("two-1", 0) == 0);
}

TEST_CASE("usage errors exit with 2") {
  Result r = cli({"run", "--preset", "two-1", "--dt", "0"});
  CHECK(r.status == exit_usage);
  CHECK(r.err.find("--dt") != std::string::npos);

  r = cli({"run", "--preset", "two-1", "--steps", "-3"});
  CHECK(r.status == exit_usage);
  CHECK(r.err.find("--steps") != std::string::npos);

  r = cli({"run", "--preset", "no-such"});
  CHECK(r.status == exit_usage);
  CHECK(r.err.find("two-1") != std::string::npos);

  CHECK(cli({"run"}).status == exit_usage);
  CHECK(cli({"run", "--preset", "two-1", "--config", "x.cfg"}).status == exit_usage);
  CHECK(cli({"run", "--preset", "two-1", "--frobnicate"}).status == exit_usage);
  CHECK(cli({}).status == exit_usage);
  CHECK(cli({"dance"}).status == exit_usage);
  CHECK(cli({"run", "--config", "/definitely/missing.cfg"}).status == exit_usage);
}

TEST_CASE("help exits cleanly") {
  const Result r = cli({"--help"});
  CHECK(r.status == exit_ok);
  CHECK(r.out.find("list-presets") != std::string::npos);
}

TEST_CASE("overrides touch only the named settings") {
  const Result plain = cli({"run", "--preset", "four-4", "--dump-config"});
  const Result changed =
      cli({"run", "--preset", "four-4", "--dt", "2e-4", "--steps", "300", "--dump-config"});
  REQUIRE(plain.status == exit_ok);
  REQUIRE(changed.status == exit_ok);
  const ScenarioConfig a = parse_config(plain.out);
  ScenarioConfig b = parse_config(changed.out);
  CHECK(a == preset("four-4"));
  CHECK(b.solver.dt == 2e-4);
  CHECK(b.solver.steps == 300);
  b.solver.dt = a.solver.dt;
  b.solver.steps = a.solver.steps;
  CHECK(a == b);
}

TEST_CASE("run a config file") {
  const auto cfg = temp("biofilm_cli.cfg");
  const auto csv = temp("biofilm_cli_cfg.csv");
  ScenarioConfig c = preset("two-3");
  c.solver.steps = 50;
  c.output.stride = 5;
  c.output.csv_path = csv.string();
  {
    std::ofstream out(cfg);
    out << serialize_config(c);
  }
  const Result r = cli({"run", "--config", cfg.string()});
  CHECK(r.status == exit_ok);
  std::ifstream in(csv);
  std::stringstream buffer;
  buffer << in.rdbuf();
  CHECK(line_count(buffer.str()) == 1 + 11);
  std::filesystem::remove(cfg);
  std::filesystem::remove(csv);
}

TEST_CASE("scenario failure exits with 1 and keeps the prefix") {
  const auto cfg = temp("biofilm_cli_fail.cfg");
  const auto csv = temp("biofilm_cli_fail.csv");
  ScenarioConfig c = preset("two-1");
  c.solver.max_newton_iterations = 1;
  c.solver.max_substep_depth = 0;
  {
    std::ofstream out(cfg);
    out << serialize_config(c);
  }
  const Result r = cli({"run", "--config", cfg.string(), "--out", csv.string()});
  CHECK(r.status == exit_failure);
  CHECK(r.err.find("did not converge") != std::string::npos);
  CHECK(std::filesystem::exists(csv));
  std::filesystem::remove(cfg);
  std::filesystem::remove(csv);
}

TEST_CASE("unwritable output exits with 1") {
  const Result r = cli({"run", "--preset", "two-1", "--steps", "2", "--out", "/nonexistent-dir/x.csv"});
  CHECK(r.status == exit_failure);
  CHECK(r.err.find("/nonexistent-dir/x.csv") != std::string::npos);
}

}  // TEST_SUITE

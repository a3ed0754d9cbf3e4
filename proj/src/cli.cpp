#include "biofilm/cli.hpp"

#include "biofilm/config_format.hpp"
#include "biofilm/csv.hpp"
#include "biofilm/presets.hpp"
#include "biofilm/solver.hpp"
#include "biofilm/verification.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <optional>

namespace biofilm {

namespace {

CLI::Validator at_least(double bound, bool strict) {
  const std::string rule = strict ? "positive" : "non-negative";
  return CLI::Validator(
      [bound, strict, rule](std::string& text) -> std::string {
        double value = 0.0;
        if (!CLI::detail::lexical_cast(text, value)) return "expected a number, got '" + text + "'";
        const bool ok = strict ? value > bound : value >= bound;
        return ok ? std::string() : "must be " + rule + ", got " + text;
      },
      strict ? "POSITIVE" : "NON-NEGATIVE");
}

struct RunOptions {
  std::string preset;
  std::string config;
  std::string out;
  std::optional<double> dt;
  std::optional<long> steps;
  bool dump_config = false;
};

int run_command(const RunOptions& o, std::ostream& out, std::ostream& err) {
  std::optional<ScenarioConfig> resolved;
  try {
    resolved = o.preset.empty() ? load_config(o.config) : preset(o.preset);
    if (o.dt) resolved->solver.dt = *o.dt;
    if (o.steps) resolved->solver.steps = *o.steps;
    resolved->validate();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  }
  const ScenarioConfig& config = *resolved;

  if (o.dump_config) {
    out << serialize_config(config);
    return exit_ok;
  }

  std::string path = o.out;
  if (path.empty()) path = config.output.csv_path;
  if (path.empty()) path = config.name + ".csv";

  out << "running " << config.name << ": " << config.solver.steps << " steps of dt "
      << format_number(config.solver.dt) << "\n";
  const Trajectory traj = run(config);
  try {
    write_trajectory(traj, config.output.stride, path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_failure;
  }
  if (!traj.ok()) {
    err << "error: " << traj.failure_message << "; " << traj.points.size()
        << " states written to " << path << "\n";
    return exit_failure;
  }
  out << to_string(traj.termination) << " after " << traj.points.back().step
      << " steps; trajectory written to " << path << "\n";
  return exit_ok;
}

int list_command(std::ostream& out) {
  std::size_t width = 0;
  for (const auto& name : preset_names()) width = std::max(width, name.size());
  for (const auto& name : preset_names()) {
    out << name << std::string(width + 2 - name.size(), ' ') << preset_description(name) << "\n";
  }
  return exit_ok;
}

int verify_command(bool quick, const std::string& summary, std::ostream& out, std::ostream& err) {
  const std::vector<CheckReport> reports = verification_suite(quick);
  std::size_t failed = 0;
  for (const auto& r : reports) {
    out << summary_line(r) << "\n";
    failed += r.passed ? 0 : 1;
  }
  out << reports.size() - failed << " of " << reports.size() << " checks passed\n";
  if (!summary.empty()) {
    try {
      write_reports(reports, summary);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return exit_failure;
    }
  }
  return failed == 0 ? exit_ok : exit_failure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-species biofilm material point simulator", "biofilm"};
  app.require_subcommand(1);

  RunOptions run_opts;
  auto* run_cmd = app.add_subcommand("run", "Simulate a preset or a config file and write CSV");
  auto* preset_opt = run_cmd->add_option("--preset", run_opts.preset, "Built-in scenario name");
  auto* config_opt = run_cmd->add_option("--config", run_opts.config, "Scenario config file")
                         ->check(CLI::ExistingFile);
  preset_opt->excludes(config_opt);
  run_cmd->add_option("--out", run_opts.out, "CSV destination (default <name>.csv)");
  run_cmd->add_option("--dt", run_opts.dt, "Override the time step")->check(at_least(0.0, true));
  run_cmd->add_option("--steps", run_opts.steps, "Override the step count")
      ->check(at_least(0.0, false));
  run_cmd->add_flag("--dump-config", run_opts.dump_config,
                    "Print the resolved config instead of running");

  app.add_subcommand("list-presets", "List built-in scenarios");

  bool quick = false;
  std::string summary;
  auto* verify_cmd = app.add_subcommand("verify", "Run the verification checks");
  verify_cmd->add_flag("--quick", quick, "Fewer samples and random scenarios");
  verify_cmd->add_option("--summary", summary, "Write a CSV summary of the checks");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
    if (run_cmd->parsed() && run_opts.preset.empty() && run_opts.config.empty()) {
      throw CLI::ValidationError("run", "needs --preset <name> or --config <path>");
    }
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return exit_ok;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return exit_usage;
  }

  if (run_cmd->parsed()) return run_command(run_opts, out, err);
  if (verify_cmd->parsed()) return verify_command(quick, summary, out, err);
  return list_command(out);
}

}  // namespace biofilm

// regimecast: Bayesian Markov-switching VECM estimation and forecasting.
//
// Subcommands:
//   simulate  generate a synthetic panel from the built-in fixture
//   estimate  run the Gibbs sampler on a level panel, write a run directory
//   forecast  recursive out-of-sample exercise over a vintage directory
//   report    recompute diagnostics from a stored run directory

#include <CLI11.hpp>
#include <cstdio>
#include <exception>

#include "regimecast/commands.hpp"
#include "regimecast/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Markov-switching VECM with hierarchical shrinkage"};
  app.set_version_flag("--version", regimecast::kVersion);
  app.require_subcommand(1);

  regimecast::SimulateArgs sim;
  std::string sim_config;
  auto* simulate = app.add_subcommand("simulate", "simulate the built-in fixture");
  simulate->add_option("--config", sim_config, "config JSON (reserved for overrides)");
  simulate->add_option("--out", sim.out_dir, "output directory")->required();
  simulate->add_option("--seed", sim.seed, "random seed");
  simulate->add_option("--T", sim.t_total, "number of periods");

  regimecast::EstimateArgs est;
  std::string est_config;
  auto* estimate = app.add_subcommand("estimate", "estimate on a level panel");
  estimate->add_option("--data", est.data_path, "level panel CSV")
      ->required()
      ->check(CLI::ExistingFile);
  estimate->add_option("--config", est_config, "config JSON")->check(CLI::ExistingFile);
  estimate->add_option("--out", est.out_dir, "run directory")->required();
  estimate->add_option("--seed", est.seed, "random seed");
  estimate->add_flag("--quiet", est.quiet, "suppress progress output");

  regimecast::ForecastArgs fc;
  std::string fc_config;
  auto* forecast = app.add_subcommand("forecast", "recursive forecast evaluation");
  forecast->add_option("--vintages", fc.vintages_dir, "directory of YYYYQq.csv vintages")
      ->required()
      ->check(CLI::ExistingDirectory);
  forecast->add_option("--config", fc_config, "config JSON")->check(CLI::ExistingFile);
  forecast->add_option("--out", fc.out_dir, "output directory")->required();
  forecast->add_option("--seed", fc.seed, "random seed");

  regimecast::ReportArgs rep;
  auto* report = app.add_subcommand("report", "recompute diagnostics from a run directory");
  report->add_option("--run", rep.run_dir, "run directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  report->add_option("--out", rep.out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (simulate->parsed()) {
      if (!sim_config.empty()) sim.config_path = sim_config;
      regimecast::cmd_simulate(sim);
    } else if (estimate->parsed()) {
      if (!est_config.empty()) est.config_path = est_config;
      regimecast::cmd_estimate(est);
    } else if (forecast->parsed()) {
      if (!fc_config.empty()) fc.config_path = fc_config;
      regimecast::cmd_forecast(fc);
    } else if (report->parsed()) {
      regimecast::cmd_report(rep);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "regimecast/config.hpp"

namespace regimecast {

// Batch entry points behind the CLI subcommands. Each throws on error; the
// CLI maps exceptions to exit codes.

struct SimulateArgs {
  std::optional<std::string> config_path;  // unset: the canonical test fixture
  std::string out_dir;
  std::uint64_t seed = 42;
  int t_total = 300;
};
void cmd_simulate(const SimulateArgs& args);

struct EstimateArgs {
  std::string data_path;
  std::optional<std::string> config_path;
  std::string out_dir;
  std::uint64_t seed = 1;
  bool quiet = false;
};
void cmd_estimate(const EstimateArgs& args);

struct ForecastArgs {
  std::string vintages_dir;
  std::optional<std::string> config_path;
  std::string out_dir;
  std::uint64_t seed = 1;
};
void cmd_forecast(const ForecastArgs& args);

struct ReportArgs {
  std::string run_dir;
  std::string out_dir;
};
void cmd_report(const ReportArgs& args);

// Post-run contract of an estimation directory: config.json, manifest.json,
// draws/*.csv and diagnostics.csv must all exist.
void verify_run_dir(const std::string& run_dir);

}  // namespace regimecast

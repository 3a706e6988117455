#include "regimecast/commands.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "regimecast/dgp.hpp"
#include "regimecast/diagnostics.hpp"
#include "regimecast/forecast.hpp"
#include "regimecast/io.hpp"
#include "regimecast/sampler.hpp"
#include "regimecast/version.hpp"

namespace regimecast {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string timestamp_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void write_text_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << text;
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  fs::rename(tmp, path);
}

ModelConfig load_config_or_default(const std::optional<std::string>& path) {
  if (path) return ModelConfig::from_json_file(*path);
  return ModelConfig{};
}

}  // namespace

void cmd_simulate(const SimulateArgs& args) {
  fs::create_directories(args.out_dir);
  const TrueParams params = default_test_params();
  const SimulatedPath path = simulate_msvecm(params, args.t_total, Rng(args.seed));
  save_dataset(path.data, (fs::path(args.out_dir) / "data.csv").string());

  std::ofstream states((fs::path(args.out_dir) / "states.csv").string());
  if (!states) throw std::runtime_error("cannot write states.csv");
  states << "date,s_true\n";
  for (std::size_t t = 0; t < path.states.size(); ++t)
    states << path.data.dates[t].str() << ',' << path.states[t] << "\n";
}

void cmd_estimate(const EstimateArgs& args) {
  ModelConfig config = load_config_or_default(args.config_path);
  const std::string started = timestamp_now();

  const Dataset data = load_dataset(args.data_path, config.transforms, config.variables);
  fs::create_directories(args.out_dir);
  write_text_atomic((fs::path(args.out_dir) / "config.json").string(),
                    config.to_json_text() + "\n");

  WarningSink warnings;
  ProgressFn progress = nullptr;
  if (!args.quiet)
    progress = [](std::int64_t sweep, std::int64_t total) {
      std::fprintf(stderr, "\r[regimecast] sweep %lld / %lld", static_cast<long long>(sweep),
                   static_cast<long long>(total));
      if (sweep == total) std::fprintf(stderr, "\n");
    };

  const PosteriorDraws draws = run_chain(data, config, Rng(args.seed), progress, &warnings);
  save_draws(draws, (fs::path(args.out_dir) / "draws").string());
  const auto diag = compute_diagnostics(draws);
  write_diagnostics_csv(diag, (fs::path(args.out_dir) / "diagnostics.csv").string());

  // Identification ordering across retained draws (permutation keeps this
  // at one by construction; the rejection mode can in principle drift).
  Eigen::Index ident_ok = 0;
  const int ident = config.ident_var;
  for (Eigen::Index i = 0; i < draws.n_retained(); ++i) {
    if (config.n_regimes == 1) {
      ++ident_ok;
      continue;
    }
    const double s0 = config.include_intercept && config.ident_stat == IdentStat::intercept
                          ? draws.a0(i, ident + draws.m * (draws.K - 1))
                          : 0.0;
    const double s1 = config.include_intercept && config.ident_stat == IdentStat::intercept
                          ? draws.a1(i, ident + draws.m * (draws.K - 1))
                          : 1.0;
    if (s0 <= s1) ++ident_ok;
  }

  json manifest;
  manifest["command"] = "estimate";
  manifest["version"] = kVersion;
  manifest["seed"] = args.seed;
  manifest["data"] = args.data_path;
  manifest["started"] = started;
  manifest["finished"] = timestamp_now();
  manifest["config"] = json::parse(config.to_json_text());
  manifest["retained_draws"] = draws.n_retained();
  manifest["effective_sample"] = draws.t_eff;
  json blocks;
  blocks["a0"] = {{"rows", draws.a0.rows()}, {"cols", draws.a0.cols()}};
  if (config.n_regimes == 2) {
    blocks["a1"] = {{"rows", draws.a1.rows()}, {"cols", draws.a1.cols()}};
    blocks["states"] = {{"rows", draws.states.rows()}, {"cols", draws.states.cols()}};
    blocks["transition"] = {{"rows", draws.trans.rows()}, {"cols", draws.trans.cols()}};
  }
  blocks["tau"] = {{"rows", draws.tau.rows()}, {"cols", draws.tau.cols()}};
  blocks["sigma0"] = {{"rows", draws.sigma0.rows()}, {"cols", draws.sigma0.cols()}};
  manifest["blocks"] = blocks;
  json notes;
  notes["identification_ok_fraction"] =
      static_cast<double>(ident_ok) / static_cast<double>(draws.n_retained());
  notes["warnings"] = warnings.messages();
  manifest["notes"] = notes;

  // The manifest lands last and atomically: a run directory without one is
  // incomplete by contract.
  write_text_atomic((fs::path(args.out_dir) / "manifest.json").string(), manifest.dump(2) + "\n");
  verify_run_dir(args.out_dir);
}

void cmd_forecast(const ForecastArgs& args) {
  ModelConfig config = load_config_or_default(args.config_path);
  const std::string started = timestamp_now();
  const VintageStore store =
      VintageStore::from_directory(args.vintages_dir, config.transforms, config.variables);

  std::vector<ModelSpec> specs;
  for (const auto& text : config.models) specs.push_back(ModelSpec::parse(text));

  WarningSink warnings;
  const LpsReport report = run_recursive_exercise(store, specs, config, Rng(args.seed), &warnings);

  fs::create_directories(args.out_dir);
  report.save_csv((fs::path(args.out_dir) / "lps.csv").string());
  const std::string target_name =
      store.vintages.begin()->second.names[static_cast<std::size_t>(config.target_var)];
  write_text_atomic((fs::path(args.out_dir) / "summary.json").string(),
                    report.summary_json(target_name) + "\n");

  json manifest;
  manifest["command"] = "forecast";
  manifest["version"] = kVersion;
  manifest["seed"] = args.seed;
  manifest["vintages"] = args.vintages_dir;
  manifest["started"] = started;
  manifest["finished"] = timestamp_now();
  manifest["config"] = json::parse(config.to_json_text());
  manifest["notes"] = {{"warnings", warnings.messages()}};
  write_text_atomic((fs::path(args.out_dir) / "manifest.json").string(), manifest.dump(2) + "\n");
}

void cmd_report(const ReportArgs& args) {
  const PosteriorDraws draws = load_draws((fs::path(args.run_dir) / "draws").string());
  fs::create_directories(args.out_dir);
  const auto diag = compute_diagnostics(draws);
  write_diagnostics_csv(diag, (fs::path(args.out_dir) / "diagnostics.csv").string());

  json summary;
  summary["retained_draws"] = draws.n_retained();
  summary["n_regimes"] = draws.n_regimes;
  summary["m"] = draws.m;
  write_text_atomic((fs::path(args.out_dir) / "summary.json").string(), summary.dump(2) + "\n");
}

void verify_run_dir(const std::string& run_dir) {
  const fs::path root(run_dir);
  for (const char* name : {"config.json", "manifest.json", "diagnostics.csv"})
    if (!fs::exists(root / name))
      throw std::runtime_error("run directory missing " + std::string(name));
  const fs::path draws = root / "draws";
  if (!fs::is_directory(draws) || !fs::exists(draws / "a0.csv"))
    throw std::runtime_error("run directory missing draws/*.csv");
}

}  // namespace regimecast

// Command line front end: run, twin, assimilate, metrics, validate.
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "prmsda/errors.hpp"
#include "prmsda/experiment.hpp"
#include "prmsda/io.hpp"

namespace fs = std::filesystem;
using namespace prmsda;

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n_ensemble;
  std::string mode;
  std::string out;
};

ExperimentConfig configure(const Overrides& o) {
  ExperimentConfig cfg = load_experiment_config(o.config);
  if (o.seed) cfg.noise.seed = *o.seed;
  if (o.n_ensemble) cfg.n_ensemble = *o.n_ensemble;
  if (!o.out.empty()) cfg.output_dir = o.out;
  cfg.validate();
  return cfg;
}

void print_metrics(const MetricsReport& m) {
  std::cout << "streamflow error (cfs), mean-absolute form / root-mean-square:\n";
  for (const auto& [k, v] : m.streamflow) {
    std::cout << "  " << k << ": " << v.rmse << " / " << v.rmse_conventional;
    if (m.streamflow_change_vs_open_loop.count(k)) {
      std::cout << "  (" << m.streamflow_change_vs_open_loop.at(k) << "% vs open loop)";
    }
    std::cout << '\n';
  }
  std::cout << "basin-mean SWE error (inches):\n";
  for (const auto& [k, v] : m.swe) {
    std::cout << "  " << k << ": " << v.rmse << " / " << v.rmse_conventional;
    if (m.swe_change_vs_open_loop.count(k)) std::cout << "  (" << m.swe_change_vs_open_loop.at(k) << "% vs open loop)";
    std::cout << '\n';
  }
}

int cmd_run(const Overrides& o) {
  const ExperimentConfig cfg = configure(o);
  const ExperimentInputs in = load_inputs(cfg);
  const auto init = initial_states(in.model, in.parameters, cfg.initial);
  const auto run = run_deterministic(in.model, in.parameters, in.forcing, init);
  fs::create_directories(cfg.output_dir);
  const std::string path = (fs::path(cfg.output_dir) / "open_loop.csv").string();
  save_series_csv(path, run.series);
  std::cout << "wrote " << path << " (" << run.series.size() << " days)\n";
  return 0;
}

int cmd_twin(const Overrides& o) {
  const ExperimentConfig cfg = configure(o);
  const ExperimentInputs in = load_inputs(cfg);
  TwinModes modes;
  if (!o.mode.empty() && o.mode != "all") {
    const RunMode m = parse_run_mode(o.mode);
    modes.swe_only = m == RunMode::SweOnly;
    modes.joint = m == RunMode::Joint;
  }
  const TwinResult r = run_twin(cfg, in, modes);
  write_twin_outputs(r, in.model.basin(), cfg.output_dir);
  print_metrics(r.metrics);
  std::cout << "outputs in " << cfg.output_dir << '\n';
  return 0;
}

int cmd_assimilate(Overrides o, const std::string& swe_path, const std::string& flow_path) {
  ExperimentConfig cfg = configure(o);
  if (!o.mode.empty()) cfg.mode = parse_run_mode(o.mode);
  if (cfg.mode == RunMode::OpenLoop) throw ConfigError("assimilate needs --mode swe-only or joint");
  if (!swe_path.empty()) cfg.swe_obs_path = swe_path;
  if (!flow_path.empty()) cfg.flow_obs_path = flow_path;
  if (cfg.swe_obs_path.empty() && cfg.flow_obs_path.empty()) throw ConfigError("no observation files given");

  const ExperimentInputs in = load_inputs(cfg);
  std::map<Date, std::vector<SweObservation>> swe;
  std::map<Date, double> flow;
  if (!cfg.swe_obs_path.empty()) swe = load_swe_observations(cfg.swe_obs_path, in.model.basin());
  if (!cfg.flow_obs_path.empty()) flow = load_flow_observations(cfg.flow_obs_path);
  const auto& forcing = in.forcing;
  ObservationSource observe = [&](std::size_t t) {
    ObservationBatch b;
    if (auto it = swe.find(forcing[t].date); it != swe.end()) b.swe = it->second;
    if (auto it = flow.find(forcing[t].date - 1); it != flow.end()) b.flow_previous = it->second;
    return b;
  };
  const FilterMode mode = cfg.mode == RunMode::Joint ? FilterMode::Joint : FilterMode::StateOnly;
  const auto init = initial_states(in.model, in.parameters, cfg.initial);
  const auto rows = run_filter(in.model, in.parameters, forcing, init, cfg.noise, cfg.n_ensemble, mode, observe,
                               cfg.threads);
  fs::create_directories(cfg.output_dir);
  const std::string path =
      (fs::path(cfg.output_dir) / (cfg.mode == RunMode::Joint ? "joint.csv" : "swe_only.csv")).string();
  save_series_csv(path, rows);
  std::cout << "wrote " << path << " (" << rows.size() << " days)\n";
  return 0;
}

int cmd_metrics(const std::string& dir) {
  const fs::path d(dir);
  const auto truth = load_series_csv((d / "truth.csv").string());
  std::map<std::string, std::vector<SeriesRow>> series;
  for (const char* name : {"open_loop", "swe_only", "joint", "ar1"}) {
    const fs::path p = d / (std::string(name) + ".csv");
    if (fs::exists(p)) series[name] = load_series_csv(p.string());
  }
  if (series.empty()) throw ConfigError("no mode series found in " + dir);
  const MetricsReport m = compute_metrics(truth, series);
  std::ofstream out((d / "metrics.json").string());
  out << m.to_json();
  print_metrics(m);
  return 0;
}

int cmd_validate(const Overrides& o) {
  const ExperimentConfig cfg = configure(o);
  const ExperimentInputs in = load_inputs(cfg);
  std::cout << "basin '" << in.model.basin().name << "': " << in.model.basin().size() << " HRUs, "
            << in.forcing.size() << " forcing days (" << in.forcing.front().date.iso() << " .. "
            << in.forcing.back().date.iso() << "), parameters valid\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HRU precipitation-runoff model with ensemble Kalman filter assimilation"};
  app.require_subcommand(1);
  Overrides o;
  std::string swe_path, flow_path;

  auto add_common = [&](CLI::App* sub, bool filter_flags) {
    sub->add_option("--config", o.config, "experiment configuration (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output directory (overrides the config)");
    if (filter_flags) {
      sub->add_option("--seed", o.seed, "random seed");
      sub->add_option("--n-ensemble", o.n_ensemble, "ensemble size")->check(CLI::Range(2, 100000));
    }
  };
  auto* run = app.add_subcommand("run", "open-loop simulation with the configured parameters");
  add_common(run, false);
  auto* twin = app.add_subcommand("twin", "synthetic twin: truth, open loop, SWE-only and joint assimilation");
  add_common(twin, true);
  twin->add_option("--mode", o.mode, "filtered modes to run: all, swe-only or joint")
      ->check(CLI::IsMember({"all", "swe-only", "joint"}));
  auto* assim = app.add_subcommand("assimilate", "filter driven by observation CSV files");
  add_common(assim, true);
  assim->add_option("--mode", o.mode, "swe-only or joint")->check(CLI::IsMember({"swe-only", "joint"}));
  assim->add_option("--swe-obs", swe_path, "SWE observations: date,hru_id,swe");
  assim->add_option("--flow-obs", flow_path, "basin streamflow observations: date,flow");
  auto* metrics = app.add_subcommand("metrics", "recompute metrics.json from stored series");
  std::string metrics_dir;
  metrics->add_option("--out", metrics_dir, "directory holding truth.csv and mode series")->required();
  auto* validate = app.add_subcommand("validate", "check configuration, parameters and forcing");
  add_common(validate, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*run) return cmd_run(o);
    if (*twin) return cmd_twin(o);
    if (*assim) return cmd_assimilate(o, swe_path, flow_path);
    if (*metrics) return cmd_metrics(metrics_dir);
    if (*validate) return cmd_validate(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

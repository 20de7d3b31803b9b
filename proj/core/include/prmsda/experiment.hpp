/**
 * @file experiment.hpp
 * @brief Experiment configuration and orchestration: open-loop runs,
 *        filtered runs, and the synthetic twin comparing all modes.
 */
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "prmsda/ensemble.hpp"
#include "prmsda/io.hpp"
#include "prmsda/model.hpp"

namespace prmsda {

enum class RunMode { OpenLoop, SweOnly, Joint };

RunMode parse_run_mode(const std::string& text);
std::string to_string(RunMode m);

/// Basin-wide initial storages.
struct InitialConditions {
  double soil_moisture_fraction = 0.5;  ///< of soilmoist_max
  double soil_recharge_fraction = 0.5;  ///< of the recharge-zone capacity
  double subsurface = 0.5;              ///< inches
  double groundwater = 2.0;             ///< inches
};

struct TwinSettings {
  double bias_fraction = 0.2;          ///< open-loop/prior offset of each augmented family, fraction of its range
  bool perturb_truth_forcing = true;   ///< truth run uses one draw of the forcing noise
};

struct ExperimentConfig {
  std::string basin_path;
  std::string forcing_path;
  std::string parameters_path;
  std::string swe_obs_path;
  std::string flow_obs_path;
  std::string output_dir = "out";
  Cadence tmax_allrain_cadence = Cadence::Constant;
  std::optional<Date> start;
  std::optional<Date> end;
  RunMode mode = RunMode::Joint;
  std::size_t n_ensemble = 100;
  unsigned threads = 0;
  NoiseConfig noise;
  ModelOptions model;
  InitialConditions initial;
  TwinSettings twin;

  std::uint64_t seed() const { return noise.seed; }
  /// Throws ConfigError when a setting is out of range.
  void validate() const;
};

/// Parses the JSON configuration; relative paths resolve against `base_dir`.
ExperimentConfig parse_experiment_config(const std::string& json_text, const std::string& base_dir);
ExperimentConfig load_experiment_config(const std::string& path);

/// Everything a run needs, loaded and validated.
struct ExperimentInputs {
  Model model;
  ParameterSet parameters;
  std::vector<ClimateForcing> forcing;
};

ExperimentInputs load_inputs(const ExperimentConfig& cfg);

std::vector<HruState> initial_states(const Model& model, const ParameterSet& params, const InitialConditions& ic);

/// Shifts each augmented family by fraction * range, clipped to range.
ParameterSet biased_parameters(const ParameterSet& p, double fraction);

/// Deterministic run. Each forcing day is passed through `forcing_transform` if given.
struct DeterministicRun {
  std::vector<SeriesRow> series;
  std::vector<std::vector<double>> swe;  ///< [day][hru] end-of-day SWE
};
DeterministicRun run_deterministic(const Model& model, const ParameterSet& params,
                                   const std::vector<ClimateForcing>& forcing, std::vector<HruState> states,
                                   const std::function<ClimateForcing(const ClimateForcing&, std::size_t)>&
                                       forcing_transform = {});

/// Observation batch for a given day index (0-based).
using ObservationSource = std::function<ObservationBatch(std::size_t day)>;

/**
 * Filtered run. Streamflow is the forecast ensemble mean in state-only mode
 * and the analysed current-runoff slot mean in joint mode; SWE is the
 * analysis ensemble mean of basin-mean SWE.
 */
std::vector<SeriesRow> run_filter(const Model& model, const ParameterSet& params,
                                  const std::vector<ClimateForcing>& forcing, const std::vector<HruState>& states,
                                  const NoiseConfig& noise, std::size_t n_ensemble, FilterMode mode,
                                  const ObservationSource& observe, unsigned threads = 0);

struct ErrorPair {
  double rmse = 0.0;               ///< mean absolute error form
  double rmse_conventional = 0.0;
};

struct MetricsReport {
  std::map<std::string, ErrorPair> streamflow;   ///< keyed by open_loop, swe_only, joint, ar1
  std::map<std::string, ErrorPair> swe;          ///< keyed by open_loop, swe_only, joint
  std::map<std::string, double> streamflow_change_vs_open_loop;  ///< percent, headline metric
  std::map<std::string, double> streamflow_change_vs_ar1;
  std::map<std::string, double> swe_change_vs_open_loop;
  double max_truth_residual = 0.0;

  std::string to_json() const;
};

/// Metrics of every available mode series against the truth series.
MetricsReport compute_metrics(const std::vector<SeriesRow>& truth, const std::map<std::string, std::vector<SeriesRow>>& modes);

struct TwinResult {
  std::vector<SeriesRow> truth;
  std::vector<SeriesRow> open_loop;
  std::vector<SeriesRow> swe_only;
  std::vector<SeriesRow> joint;
  std::vector<SeriesRow> ar1;
  std::vector<std::vector<double>> truth_swe;  ///< [day][hru]
  MetricsReport metrics;
};

struct TwinModes {
  bool swe_only = true;
  bool joint = true;
};

TwinResult run_twin(const ExperimentConfig& cfg, const ExperimentInputs& inputs, TwinModes modes = {});
TwinResult run_twin(const ExperimentConfig& cfg);

/// Writes truth.csv, open_loop.csv, swe_only.csv, joint.csv, ar1.csv,
/// observations_swe.csv, observations_flow.csv and metrics.json into `dir`.
void write_twin_outputs(const TwinResult& r, const Basin& basin, const std::string& dir);

}  // namespace prmsda

/**
 * @file ensemble.hpp
 * @brief Ensemble of model replicas driven by the EnKF: initialization,
 *        perturbed parallel forecast, analysis with clamping and inflation,
 *        parameter re-inflation.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "prmsda/filter.hpp"
#include "prmsda/layout.hpp"
#include "prmsda/model.hpp"

namespace prmsda {

struct NoiseConfig {
  double process_fraction = 0.01;      ///< eta ~ N(0, (fraction * ensemble mean)^2) on state slots
  double precip_fraction = 0.4;        ///< sigma_P = fraction * P
  double temperature_sd_c = 2.0;       ///< common shift of Tmax and Tmin, degC
  double inflation = 0.9;              ///< weight of forecast anomalies after analysis
  double parameter_init_fraction = 0.25;    ///< sigma_p = fraction * range
  double parameter_target_fraction = 0.25;  ///< sigma_target = fraction * sigma_p
  double initial_state_fraction = 0.1;      ///< initial member spread as a fraction of each state value
  double swe_obs_fraction = 0.1;
  double swe_obs_floor = 0.01;
  double flow_obs_fraction = 0.005;
  double flow_obs_floor = 0.01;
  bool reinflate_parameters = true;
  std::uint64_t seed = 1;
};

/// Throws ConfigError if a fraction is outside [0,1] (inflation) or negative.
void validate_noise(const NoiseConfig& n);

/// Per-member forcing realization: P ~ N(P, (f P)^2) floored at 0; one
/// temperature shift N(0, sd^2) (converted to degF) added to Tmax and Tmin.
ClimateForcing perturb_forcing(const ClimateForcing& f, const NoiseConfig& noise, Rng& rng);

struct SweObservation {
  std::size_t hru = 0;  ///< HRU position
  double swe = 0.0;
};

struct ObservationBatch {
  std::vector<SweObservation> swe;
  std::optional<double> flow_previous;  ///< measured basin flow of the previous day, cfs
};

/// Builds H, y and sigma against `layout` with the proportional error rules.
ObservationSet build_observations(const ObservationBatch& batch, const StateLayout& layout, const NoiseConfig& noise);

struct Member {
  std::vector<HruState> states;
  ParameterSet params;
  double runoff_previous = 0.0;
  double runoff_current = 0.0;
  DailyOutput last;  ///< output of the latest forecast step
};

struct ForecastSummary {
  double flow_mean = 0.0;  ///< cfs
  double flow_std = 0.0;
  double swe_mean = 0.0;   ///< basin-mean SWE, inches
  double swe_std = 0.0;
  double surface_runoff = 0.0;
  double subsurface_flow = 0.0;
  double groundwater_flow = 0.0;
  double max_abs_residual = 0.0;
};

struct AnalysisSummary {
  double swe_mean = 0.0;            ///< basin-mean SWE after clamping, before inflation
  double swe_std_before_inflation = 0.0;
  double swe_std = 0.0;             ///< after inflation, clamping and re-inflation
  double swe_mean_final = 0.0;
  double runoff_current_mean = 0.0; ///< cfs, final
  std::size_t reinflated_slots = 0;
  bool regularized = false;
};

class Ensemble {
 public:
  /**
   * Draws `n` members around `mean_states` / `params`. State slots get
   * N(0, (initial_state_fraction * value)^2); in joint mode the augmented
   * parameter families get N(0, sigma_p^2) (one draw per instance, shared by
   * the twelve months of monthly families). Everything is clamped.
   */
  Ensemble(const Model& model, const std::vector<HruState>& mean_states, const ParameterSet& params,
           const NoiseConfig& noise, std::size_t n, FilterMode mode);

  std::size_t size() const { return members_.size(); }
  const StateLayout& layout() const { return layout_; }
  const std::vector<Member>& members() const { return members_; }
  std::vector<Member>& members() { return members_; }
  const NoiseConfig& noise() const { return noise_; }

  /// Advances every member one day with its own forcing realization, then
  /// adds process noise and clamps. `day` indexes the random streams.
  ForecastSummary forecast(const ClimateForcing& forcing, std::uint64_t day, unsigned threads = 0);

  /// Analysis, clamp, inflation, clamp, and (joint) parameter re-inflation.
  AnalysisSummary analyze(const ObservationBatch& batch, unsigned month, std::uint64_t day,
                          const AnalysisOptions& opts = {});

  Eigen::MatrixXd to_matrix(unsigned month) const;
  void from_matrix(const Eigen::MatrixXd& x, unsigned month);
  /// Clamps parameters, states and runoff slots of every member.
  void clamp_all();

  /// sigma_target for every slot (zero for non-parameter slots).
  const std::vector<double>& parameter_targets() const { return targets_; }

  double basin_mean_swe(const Member& m) const { return model_->basin_mean(m.states, StateField::Swe); }

 private:
  const Model* model_;
  NoiseConfig noise_;
  StateLayout layout_;
  std::vector<Member> members_;
  std::vector<double> targets_;
};

/// Stream purposes mixed into Rng::stream coordinates.
enum class StreamPurpose : std::uint64_t { Init = 1, Forcing = 2, Process = 3, Analysis = 4, Reinflate = 5, Truth = 6 };

}  // namespace prmsda

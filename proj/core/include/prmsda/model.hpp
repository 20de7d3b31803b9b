/**
 * @file model.hpp
 * @brief Basin description and the daily driver that chains all processes.
 */
#pragma once

#include <string>
#include <vector>

#include "prmsda/calendar.hpp"
#include "prmsda/forcing.hpp"
#include "prmsda/parameters.hpp"
#include "prmsda/snowpack.hpp"
#include "prmsda/state.hpp"
#include "prmsda/types.hpp"

namespace prmsda {

struct Basin {
  std::string name;
  std::vector<HruGeometry> hrus;
  std::size_t index_hru = 0;  ///< position of the HRU holding the temperature station

  std::size_t size() const { return hrus.size(); }
  double total_area() const;
  double index_elevation() const { return hrus.at(index_hru).elevation_ft; }
  /// Position of the HRU with this id, or throws ConfigError.
  std::size_t position_of(int id) const;
  /// Throws ConfigError on empty basin, duplicate ids or invalid geometry.
  void validate() const;
};

struct ModelOptions {
  SeasonCalendar season;
  SnowOptions snow;
  StateBoundsConfig bounds;
  DegreeDayCurve degree_day_curve = DegreeDayCurve::standard();
  /// Use the literal product form in the contributing-area exponent.
  bool product_runoff_exponent = false;
};

struct DailyOutput {
  Date date;
  std::vector<FluxRecord> fluxes;
  double flow_inches = 0.0;        ///< area-weighted basin streamflow, inches/day
  double flow_cfs = 0.0;
  double surface_runoff = 0.0;     ///< area-weighted components, inches/day
  double subsurface_flow = 0.0;
  double groundwater_flow = 0.0;
  double actual_et = 0.0;
  double swe_mean = 0.0;           ///< area-weighted SWE after the step
  double residual = 0.0;           ///< area-weighted water-balance residual
  double max_abs_residual = 0.0;   ///< largest per-HRU residual magnitude
};

/// Total water held by an HRU (HRU-average inches) under canopy cover `cover`.
double total_storage(const HruState& s, const HruGeometry& g, double cover);

class Model {
 public:
  Model(Basin basin, ModelOptions options = {});

  const Basin& basin() const { return basin_; }
  const ModelOptions& options() const { return options_; }
  const SolarTable& solar() const { return solar_; }

  /// Advances every HRU by one day. Throws ModelError on any non-finite value.
  DailyOutput daily_step(const ParameterSet& params, std::vector<HruState>& states,
                         const ClimateForcing& forcing) const;

  /// Flow in inches/day over the basin converted to cfs.
  double to_cfs(double inches_per_day) const;

  double basin_mean(const std::vector<HruState>& states, StateField f) const;

  HruStateBounds bounds(const ParameterSet& params, std::size_t hru) const {
    return state_bounds(basin_.hrus[hru], params, hru, options_.bounds);
  }

 private:
  FluxRecord hru_step(std::size_t h, const ParameterSet& params, HruState& s, const ClimateForcing& f) const;

  Basin basin_;
  ModelOptions options_;
  SolarTable solar_;
  double total_area_ = 0.0;
};

/// Reads a basin JSON file: {"name", "index_hru", "hrus": [{id, area_acres, ...}]}.
Basin load_basin(const std::string& path);
Basin parse_basin(const std::string& json_text);

}  // namespace prmsda

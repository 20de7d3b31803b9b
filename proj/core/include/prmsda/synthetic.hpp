/**
 * @file synthetic.hpp
 * @brief Seeded synthetic weather for twin experiments.
 *
 * Index-station temperatures follow an annual sinusoid plus an AR(1)
 * anomaly; precipitation is a two-season wet-day process with exponential
 * depths scaled upward with elevation above the index HRU.
 */
#pragma once

#include <cstdint>
#include <vector>

#include "prmsda/forcing.hpp"
#include "prmsda/model.hpp"

namespace prmsda {

struct WeatherSettings {
  double tavg_annual_f = 48.0;
  double tavg_amplitude_f = 18.0;
  int warmest_day_of_year = 200;
  double diurnal_range_f = 24.0;
  double anomaly_sd_f = 5.0;
  double anomaly_persistence = 0.7;
  double wet_probability_winter = 0.35;  ///< Nov-Apr
  double wet_probability_summer = 0.06;  ///< May-Oct
  double mean_wet_depth = 0.75;          ///< inches at the index HRU
  double orographic_gain_per_kft = 0.12;
  double hru_depth_noise = 0.15;         ///< relative spread between HRUs on a wet day
  double storm_cooling_f = 6.0;
  double storm_range_reduction_f = 8.0;
};

std::vector<ClimateForcing> synthetic_forcing(const Basin& basin, const Date& start, const Date& end,
                                              std::uint64_t seed, const WeatherSettings& settings = {});

}  // namespace prmsda

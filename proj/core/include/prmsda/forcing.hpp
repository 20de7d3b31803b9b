/**
 * @file forcing.hpp
 * @brief Station-to-HRU climate distribution and derived forcings.
 *
 * Temperatures are distributed from one index HRU by monthly lapse rates and
 * per-HRU adjustments. Shortwave radiation follows the degree-day method:
 * dd = slope * Tmax + intercept, r = curve(dd), Rsw = r * gamma / cos(atan(slope)) * Rpsw.
 */
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "prmsda/calendar.hpp"
#include "prmsda/types.hpp"

namespace prmsda {

/// One day of model input: precipitation per HRU plus index-station temperatures.
struct ClimateForcing {
  Date date;
  double tmax_station = 0.0;  ///< degF
  double tmin_station = 0.0;  ///< degF
  std::vector<double> precip; ///< inches, one per HRU
};

inline double fahrenheit_to_celsius(double f) { return (f - 32.0) / 1.8; }

/// Monotone piecewise-linear degree-day -> actual/potential radiation ratio.
class DegreeDayCurve {
 public:
  DegreeDayCurve() = default;
  /// Throws ConfigError unless dd is strictly increasing and ratios lie in [0,1].
  DegreeDayCurve(std::vector<double> degree_days, std::vector<double> ratios);

  /// 26 points over degree-days 1..26 rising from 0.2 to 0.9.
  static DegreeDayCurve standard();
  /// Whitespace-delimited "dd ratio" rows; '#' starts a comment.
  static DegreeDayCurve load(const std::string& path);

  /// Linear interpolation; clamps to the endpoint ratios outside the domain.
  double ratio(double dd) const;

  const std::vector<double>& degree_days() const { return dd_; }
  const std::vector<double>& ratios() const { return r_; }

 private:
  std::vector<double> dd_;
  std::vector<double> r_;
};

/// Clear-sky potential shortwave (Langleys/day) per HRU per day of year.
class SolarTable {
 public:
  SolarTable() = default;
  SolarTable(std::size_t n_hru, std::vector<double> values);

  /// Extraterrestrial radiation from solar declination and sunset hour angle,
  /// attenuated by an elevation-dependent clear-sky transmissivity.
  static SolarTable clear_sky(const std::vector<HruGeometry>& hrus);

  double potential(int day_of_year, std::size_t hru) const {
    return values_[static_cast<std::size_t>(day_of_year - 1) * n_hru_ + hru];
  }
  std::size_t hru_count() const { return n_hru_; }

 private:
  std::size_t n_hru_ = 0;
  std::vector<double> values_;  // 366 x n_hru, row-major by day
};

/// Calendar window (inclusive) treated as summer for canopy and radiation.
struct SeasonCalendar {
  unsigned summer_start_month = 5;
  unsigned summer_start_day = 1;
  unsigned summer_end_month = 9;
  unsigned summer_end_day = 30;

  bool is_summer(const Date& d) const {
    const unsigned key = d.month() * 100 + d.day();
    return key >= summer_start_month * 100 + summer_start_day && key <= summer_end_month * 100 + summer_end_day;
  }
};

struct HruTemperature {
  double tmax = 0.0;
  double tmin = 0.0;
  double tavg() const { return 0.5 * (tmax + tmin); }
};

/// Lapse-rate distribution; lapse rates in degF per 1000 ft. Tmin is capped at Tmax.
HruTemperature distribute_temperature(double tmax_station, double tmin_station, double elevation_ft,
                                      double index_elevation_ft, double tmax_lapse, double tmin_lapse,
                                      double tmax_adj, double tmin_adj);

struct ShortwaveParams {
  double dday_slope = 0.4;
  double dday_intcp = -10.0;
  double ppt_rad_adj = 0.02;
  double radj_sppt = 0.44;
  double radj_wppt = 0.5;
};

/// Daily shortwave on the HRU surface, Langleys.
double shortwave_radiation(double tmax_h, double precip, bool summer, double potential, double slope,
                           const ShortwaveParams& p, const DegreeDayCurve& curve);

/// Rain fraction of precipitation in [0,1].
double rain_fraction(double tmax_h, double tmin_h, double tmax_allsnow, double tmax_allrain, double adjmix_rain);

/// Jensen-Haise potential ET in inches/day (floored at zero).
double jensen_haise_pet(double tavg_f, double shortwave, double elevation_ft, double jh_coef);

}  // namespace prmsda

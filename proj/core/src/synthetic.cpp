#include "prmsda/synthetic.hpp"

#include <cmath>
#include <numbers>

#include "prmsda/errors.hpp"
#include "prmsda/rng.hpp"

namespace prmsda {

std::vector<ClimateForcing> synthetic_forcing(const Basin& basin, const Date& start, const Date& end,
                                              std::uint64_t seed, const WeatherSettings& w) {
  if (end < start) throw ConfigError("synthetic forcing: end precedes start");
  basin.validate();
  Rng rng(seed);
  std::vector<ClimateForcing> out;
  double anomaly = 0.0;
  const double innovation_sd = w.anomaly_sd_f * std::sqrt(1.0 - w.anomaly_persistence * w.anomaly_persistence);
  for (Date d = start; d <= end; ++d) {
    const unsigned m = d.month();
    const bool winter = m >= 11 || m <= 4;
    const bool wet = rng.uniform() < (winter ? w.wet_probability_winter : w.wet_probability_summer);
    const double depth = wet ? -w.mean_wet_depth * std::log(1.0 - rng.uniform()) : 0.0;
    anomaly = w.anomaly_persistence * anomaly + innovation_sd * rng.normal();

    const double phase = 2.0 * std::numbers::pi * (d.day_of_year() - w.warmest_day_of_year) / 365.25;
    double tavg = w.tavg_annual_f + w.tavg_amplitude_f * std::cos(phase) + anomaly;
    double range = w.diurnal_range_f;
    if (wet) {
      tavg -= w.storm_cooling_f;
      range -= w.storm_range_reduction_f;
    }
    ClimateForcing f;
    f.date = d;
    f.tmax_station = tavg + 0.5 * range;
    f.tmin_station = tavg - 0.5 * range;
    f.precip.resize(basin.size());
    for (std::size_t h = 0; h < basin.size(); ++h) {
      const double kft = (basin.hrus[h].elevation_ft - basin.index_elevation()) / 1000.0;
      const double noise = w.hru_depth_noise * rng.normal();
      const double scale = std::max(0.0, 1.0 + w.orographic_gain_per_kft * kft + noise);
      f.precip[h] = wet ? std::round(depth * scale * 1000.0) / 1000.0 : 0.0;
    }
    f.tmax_station = std::round(f.tmax_station * 10.0) / 10.0;
    f.tmin_station = std::round(f.tmin_station * 10.0) / 10.0;
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace prmsda

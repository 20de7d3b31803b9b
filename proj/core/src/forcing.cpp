#include "prmsda/forcing.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "prmsda/errors.hpp"

namespace prmsda {

DegreeDayCurve::DegreeDayCurve(std::vector<double> degree_days, std::vector<double> ratios)
    : dd_(std::move(degree_days)), r_(std::move(ratios)) {
  if (dd_.size() < 2 || dd_.size() != r_.size()) {
    throw ConfigError("degree-day curve needs >= 2 matching (dd, ratio) points");
  }
  for (std::size_t i = 0; i < dd_.size(); ++i) {
    if (!(r_[i] >= 0.0 && r_[i] <= 1.0)) throw ConfigError("degree-day curve ratio outside [0,1]");
    if (i > 0 && !(dd_[i] > dd_[i - 1])) throw ConfigError("degree-day curve must be strictly increasing in dd");
  }
}

DegreeDayCurve DegreeDayCurve::standard() {
  std::vector<double> dd(26), r(26);
  const double span = 1.0 - std::exp(-25.0 / 6.0);
  for (int i = 0; i < 26; ++i) {
    dd[i] = i + 1.0;
    r[i] = 0.2 + 0.7 * (1.0 - std::exp(-i / 6.0)) / span;
  }
  r.back() = 0.9;
  return DegreeDayCurve(std::move(dd), std::move(r));
}

DegreeDayCurve DegreeDayCurve::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open degree-day curve " + path);
  std::vector<double> dd, r;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    double a, b;
    if (!(ls >> a)) continue;
    if (!(ls >> b)) throw ParseError(path + ": expected 'dd ratio'", n);
    dd.push_back(a);
    r.push_back(b);
  }
  return DegreeDayCurve(std::move(dd), std::move(r));
}

double DegreeDayCurve::ratio(double dd) const {
  if (dd <= dd_.front()) return r_.front();
  if (dd >= dd_.back()) return r_.back();
  const auto it = std::upper_bound(dd_.begin(), dd_.end(), dd);
  const std::size_t i = static_cast<std::size_t>(it - dd_.begin());
  const double t = (dd - dd_[i - 1]) / (dd_[i] - dd_[i - 1]);
  return std::clamp(r_[i - 1] + t * (r_[i] - r_[i - 1]), 0.0, 1.0);
}

SolarTable::SolarTable(std::size_t n_hru, std::vector<double> values) : n_hru_(n_hru), values_(std::move(values)) {
  if (values_.size() != 366 * n_hru_) throw ConfigError("solar table must hold 366 rows per HRU");
  for (double v : values_) {
    if (!(v >= 0.0)) throw ConfigError("solar table values must be non-negative");
  }
}

SolarTable SolarTable::clear_sky(const std::vector<HruGeometry>& hrus) {
  constexpr double pi = std::numbers::pi;
  constexpr double solar_constant = 0.0820;  // MJ m^-2 min^-1
  constexpr double mj_per_langley = 0.04184;
  std::vector<double> values(366 * hrus.size());
  for (int doy = 1; doy <= 366; ++doy) {
    const double dr = 1.0 + 0.033 * std::cos(2.0 * pi * doy / 365.0);
    const double decl = 0.409 * std::sin(2.0 * pi * doy / 365.0 - 1.39);
    for (std::size_t h = 0; h < hrus.size(); ++h) {
      const double lat = hrus[h].latitude_deg * pi / 180.0;
      const double ws = std::acos(std::clamp(-std::tan(lat) * std::tan(decl), -1.0, 1.0));
      const double ra = 24.0 * 60.0 / pi * solar_constant * dr *
                        (ws * std::sin(lat) * std::sin(decl) + std::cos(lat) * std::cos(decl) * std::sin(ws));
      const double elevation_m = hrus[h].elevation_ft * 0.3048;
      const double transmissivity = std::min(0.75 + 2.0e-5 * elevation_m, 1.0);
      values[static_cast<std::size_t>(doy - 1) * hrus.size() + h] =
          std::max(0.0, transmissivity * ra / mj_per_langley);
    }
  }
  return SolarTable(hrus.size(), std::move(values));
}

HruTemperature distribute_temperature(double tmax_station, double tmin_station, double elevation_ft,
                                      double index_elevation_ft, double tmax_lapse, double tmin_lapse,
                                      double tmax_adj, double tmin_adj) {
  if (!std::isfinite(elevation_ft) || !std::isfinite(index_elevation_ft)) {
    throw ConfigError("temperature distribution requires finite HRU and index elevations");
  }
  const double kft = (elevation_ft - index_elevation_ft) / 1000.0;
  HruTemperature t;
  t.tmax = tmax_station - tmax_lapse * kft - tmax_adj;
  t.tmin = tmin_station - tmin_lapse * kft - tmin_adj;
  t.tmin = std::min(t.tmin, t.tmax);
  return t;
}

double shortwave_radiation(double tmax_h, double precip, bool summer, double potential, double slope,
                           const ShortwaveParams& p, const DegreeDayCurve& curve) {
  const double dd = p.dday_slope * tmax_h + p.dday_intcp;
  const double r = std::clamp(curve.ratio(dd), 0.0, 1.0);
  double gamma = 1.0;
  if (precip > p.ppt_rad_adj) gamma = summer ? p.radj_sppt : p.radj_wppt;
  return r * gamma / std::cos(std::atan(slope)) * potential;
}

double rain_fraction(double tmax_h, double tmin_h, double tmax_allsnow, double tmax_allrain, double adjmix_rain) {
  if (tmax_h <= tmax_allsnow) return 0.0;
  if (tmin_h >= tmax_allsnow && tmax_h >= tmax_allrain) return 1.0;
  const double range = tmax_h - tmin_h;
  if (range <= 0.0) return tmax_h > tmax_allsnow ? 1.0 : 0.0;
  const double fr = (tmax_h - tmax_allsnow) / range * adjmix_rain;
  return std::clamp(fr, 0.0, 1.0);
}

double jensen_haise_pet(double tavg_f, double shortwave, double elevation_ft, double jh_coef) {
  const double jh_hru = 22.0 - elevation_ft / 1000.0;
  const double et = jh_coef * (tavg_f - jh_hru) * shortwave / (2.54 * (597.3 - 0.5653 * tavg_f));
  return std::max(et, 0.0);
}

}  // namespace prmsda

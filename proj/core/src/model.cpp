#include "prmsda/model.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "prmsda/canopy.hpp"
#include "prmsda/errors.hpp"
#include "prmsda/soil_routing.hpp"

namespace prmsda {

double Basin::total_area() const {
  double a = 0.0;
  for (const auto& h : hrus) a += h.area_acres;
  return a;
}

std::size_t Basin::position_of(int id) const {
  for (std::size_t i = 0; i < hrus.size(); ++i) {
    if (hrus[i].id == id) return i;
  }
  throw ConfigError("unknown HRU id " + std::to_string(id));
}

void Basin::validate() const {
  if (hrus.empty()) throw ConfigError("basin has no HRUs");
  if (index_hru >= hrus.size()) throw ConfigError("index HRU out of range");
  std::set<int> ids;
  for (const auto& h : hrus) {
    validate_geometry(h);
    if (!ids.insert(h.id).second) throw ConfigError("duplicate HRU id " + std::to_string(h.id));
  }
}

double total_storage(const HruState& s, const HruGeometry& g, double cover) {
  const double pervious = 1.0 - g.impervious_fraction;
  return cover * s.interception + s.swe + s.impervious + pervious * s.soil_moisture + s.subsurface + s.groundwater;
}

Model::Model(Basin basin, ModelOptions options) : basin_(std::move(basin)), options_(std::move(options)) {
  basin_.validate();
  solar_ = SolarTable::clear_sky(basin_.hrus);
  total_area_ = basin_.total_area();
}

double Model::to_cfs(double inches_per_day) const { return inches_per_day * total_area_ * kAcreInchPerDayToCfs; }

double Model::basin_mean(const std::vector<HruState>& states, StateField f) const {
  double sum = 0.0;
  for (std::size_t h = 0; h < states.size(); ++h) sum += field(states[h], f) * basin_.hrus[h].area_acres;
  return sum / total_area_;
}

namespace {

bool in_window(const Date& d, unsigned sm, unsigned sd, unsigned em, unsigned ed) {
  const unsigned key = d.month() * 100 + d.day();
  const unsigned lo = sm * 100 + sd;
  const unsigned hi = em * 100 + ed;
  return lo <= hi ? (key >= lo && key <= hi) : (key >= lo || key <= hi);
}

void require_finite(const HruState& s, const FluxRecord& f, const HruGeometry& g, const Date& date) {
  auto fail = [&](std::string_view what) {
    throw ModelError("non-finite " + std::string(what) + " in HRU " + std::to_string(g.id) + " on " + date.iso());
  };
  for (std::size_t i = 0; i < kStateFieldNames.size(); ++i) {
    if (!std::isfinite(field(s, i))) fail(kStateFieldNames[i]);
  }
  const double fluxes[] = {f.net_precip, f.melt, f.sublimation, f.surface_runoff, f.subsurface_flow,
                           f.groundwater_flow, f.actual_et, f.shortwave, f.potential_et, f.energy_balance};
  for (double v : fluxes) {
    if (!std::isfinite(v)) fail("flux");
  }
}

}  // namespace

FluxRecord Model::hru_step(std::size_t h, const ParameterSet& p, HruState& s, const ClimateForcing& f) const {
  using P = ParamId;
  const HruGeometry& g = basin_.hrus[h];
  const unsigned month = f.date.month();
  const bool summer = options_.season.is_summer(f.date);
  const bool was_summer = options_.season.is_summer(f.date - 1);
  const double cover = summer ? g.cover_summer : g.cover_winter;
  const double old_cover = was_summer ? g.cover_summer : g.cover_winter;
  const double fi = g.impervious_fraction;
  const double pervious = 1.0 - fi;

  FluxRecord r;
  const double precip = f.precip[h];
  r.precip = precip;
  const double storage_before = total_storage(s, g, old_cover);

  const HruTemperature t = distribute_temperature(
      f.tmax_station, f.tmin_station, g.elevation_ft, basin_.index_elevation(), p.value(P::TmaxLapse, h, month),
      p.value(P::TminLapse, h, month), p.value(P::TmaxAdj, h, month), p.value(P::TminAdj, h, month));
  const double tavg = t.tavg();

  const double rain_cap = summer ? p.value(P::SrainIntcp, h, month) : p.value(P::WrainIntcp, h, month);
  const double snow_cap = p.value(P::SnowIntcp, h, month);
  double released = 0.0;
  if (cover != old_cover) {
    const CanopyTransfer tr = canopy_cover_change(s.interception, old_cover, cover, std::max(rain_cap, snow_cap));
    s.interception = tr.storage;
    released = tr.released;
  }

  ShortwaveParams sw;
  sw.dday_slope = p.value(P::DdaySlope, h, month);
  sw.dday_intcp = p.value(P::DdayIntcp, h, month);
  sw.ppt_rad_adj = p.value(P::PptRadAdj, h, month);
  sw.radj_sppt = p.value(P::RadjSppt, h, month);
  sw.radj_wppt = p.value(P::RadjWppt, h, month);
  r.shortwave = shortwave_radiation(t.tmax, precip, summer, solar_.potential(f.date.day_of_year(), h), g.slope, sw,
                                    options_.degree_day_curve);

  const double fr = rain_fraction(t.tmax, t.tmin, p.value(P::TmaxAllsnow, h, month),
                                  p.value(P::TmaxAllrain, h, month), p.value(P::AdjmixRain, h, month));
  const CanopyResult c = intercept(precip, fr, s.interception, cover, rain_cap, snow_cap);
  s.interception = c.storage;
  r.throughfall = c.throughfall;
  r.net_rain = c.net_rain + released;
  r.net_snow = c.net_snow;
  r.net_precip = c.net_precip + released;

  r.potential_et = jensen_haise_pet(tavg, r.shortwave, g.elevation_ft, p.value(P::JhCoef, h, month));
  double et_left = r.potential_et;

  const CanopyEvaporation ce = canopy_evaporate(s.interception, et_left);
  s.interception = ce.storage;
  r.canopy_evap = cover * ce.depleted;
  et_left = std::max(0.0, et_left - r.canopy_evap);

  SnowDayInput si;
  si.net_rain = r.net_rain;
  si.net_snow = r.net_snow;
  si.precip = precip;
  si.tmax_c = fahrenheit_to_celsius(t.tmax);
  si.tmin_c = fahrenheit_to_celsius(t.tmin);
  si.shortwave = r.shortwave;
  si.cover = g.cover_winter;
  si.et_available = et_left;
  const SnowOptions& so = options_.snow;
  si.melt_season = in_window(f.date, so.melt_season_start_month, so.melt_season_start_day, so.melt_season_end_month,
                             so.melt_season_end_day);
  SnowParams sp;
  sp.rad_trncf = p.value(P::RadTrncf, h, month);
  sp.emis_noppt = p.value(P::EmisNoppt, h, month);
  sp.cecn_coef = p.value(P::CecnCoef, h, month);
  sp.potet_sublim = p.value(P::PotetSublim, h, month);
  sp.den_init = p.value(P::DenInit, h, month);
  sp.den_max = p.value(P::DenMax, h, month);
  sp.settle_const = p.value(P::SettleConst, h, month);
  sp.snarea_thresh = p.value(P::SnareaThresh, h, month);
  sp.depletion = p.values(P::SnareaCurve);
  const SnowDayOutput snow = snowpack_step(s, si, sp, so);
  r.melt = snow.outflow;
  r.sublimation = snow.sublimation;
  r.energy_balance = snow.energy.balance;
  r.longwave_in = snow.energy.longwave_in;
  r.convection = snow.energy.convection;
  r.net_shortwave = snow.energy.net_shortwave;
  r.conduction = snow.energy.conduction;
  r.blackbody = snow.energy.blackbody;
  et_left = std::max(0.0, et_left - r.sublimation);

  const double surface_in = snow.rain_bypass + snow.outflow;

  const ImperviousResult imp = impervious_step(surface_in * fi, s.impervious, p.value(P::ImpervStorMax, h, month) * fi,
                                               et_left * (1.0 - s.fsca) * fi);
  s.impervious = imp.storage;
  r.impervious_evap = imp.evap;
  et_left = std::max(0.0, et_left - r.impervious_evap);

  const double ca = contributing_area(p.value(P::SmidxCoef, h, month), p.value(P::SmidxExp, h, month),
                                      s.soil_moisture, r.net_precip, p.value(P::CareaMax, h, month),
                                      options_.product_runoff_exponent);
  const double pervious_runoff = ca * surface_in;
  const double infiltration = surface_in - pervious_runoff;

  const double soil_max = p.value(P::SoilmoistMax, h, month);
  const SoilZoneResult soil =
      soil_zone_step(infiltration, et_left, s.soil_recharge, s.soil_moisture, soil_max,
                     options_.bounds.recharge_fraction * soil_max, p.value(P::Soil2gwMax, h, month));
  s.soil_recharge = soil.recharge;
  s.soil_moisture = soil.moisture;
  r.soil_et = pervious * soil.et;
  r.soil_to_gw = pervious * soil.to_groundwater;

  const SubsurfaceResult ssr =
      subsurface_step(s.subsurface, pervious * soil.to_subsurface, p.value(P::SsrcoefLin, h, month),
                      p.value(P::SsrcoefSq, h, month), p.value(P::Ssr2gwRate, h, month),
                      p.value(P::Ssr2gwExp, h, month), p.value(P::SsrmaxCoef, h, month));
  s.subsurface = ssr.storage;
  r.subsurface_flow = ssr.flow;
  r.ssr_to_gw = ssr.to_gw;

  const GroundwaterResult gw = groundwater_step(s.groundwater, r.soil_to_gw + r.ssr_to_gw,
                                                p.value(P::GwflowCoef, h, month), p.value(P::GwsinkCoef, h, month));
  s.groundwater = gw.storage;
  r.groundwater_flow = gw.flow;
  r.groundwater_sink = gw.sink;

  r.surface_runoff = pervious * pervious_runoff + imp.runoff;
  r.actual_et = r.canopy_evap + r.sublimation + r.impervious_evap + r.soil_et;

  const double storage_after = total_storage(s, g, cover);
  r.residual = precip - (storage_after - storage_before) - r.streamflow() - r.actual_et - r.groundwater_sink;
  require_finite(s, r, g, f.date);
  return r;
}

DailyOutput Model::daily_step(const ParameterSet& params, std::vector<HruState>& states,
                              const ClimateForcing& forcing) const {
  const std::size_t n = basin_.size();
  if (states.size() != n) throw ModelError("state count does not match HRU count");
  if (forcing.precip.size() != n) throw ModelError("forcing for " + forcing.date.iso() + " has wrong HRU count");
  if (params.hru_count() != n) throw ModelError("parameter set does not match HRU count");

  DailyOutput out;
  out.date = forcing.date;
  out.fluxes.resize(n);
  for (std::size_t h = 0; h < n; ++h) out.fluxes[h] = hru_step(h, params, states[h], forcing);

  for (std::size_t h = 0; h < n; ++h) {
    const double w = basin_.hrus[h].area_acres / total_area_;
    const FluxRecord& r = out.fluxes[h];
    out.surface_runoff += w * r.surface_runoff;
    out.subsurface_flow += w * r.subsurface_flow;
    out.groundwater_flow += w * r.groundwater_flow;
    out.actual_et += w * r.actual_et;
    out.residual += w * r.residual;
    out.max_abs_residual = std::max(out.max_abs_residual, std::abs(r.residual));
  }
  out.swe_mean = basin_mean(states, StateField::Swe);
  out.flow_inches = out.surface_runoff + out.subsurface_flow + out.groundwater_flow;
  out.flow_cfs = to_cfs(out.flow_inches);
  return out;
}

namespace {

double number(const nlohmann::json& j, const char* key, double fallback, bool required) {
  if (!j.contains(key)) {
    if (required) throw ConfigError(std::string("HRU entry missing '") + key + "'");
    return fallback;
  }
  if (!j.at(key).is_number()) throw ConfigError(std::string("HRU field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

}  // namespace

Basin parse_basin(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("basin file: ") + e.what(), 0);
  }
  Basin b;
  b.name = j.value("name", std::string("basin"));
  if (!j.contains("hrus") || !j["hrus"].is_array()) throw ConfigError("basin file needs an 'hrus' array");
  for (const auto& e : j["hrus"]) {
    HruGeometry g;
    g.id = static_cast<int>(number(e, "id", 0, true));
    g.area_acres = number(e, "area_acres", 0, true);
    g.elevation_ft = number(e, "elevation_ft", 0, true);
    g.slope = number(e, "slope", 0.0, false);
    g.latitude_deg = number(e, "latitude_deg", 40.0, false);
    g.cover_summer = number(e, "cover_summer", 0.0, false);
    g.cover_winter = number(e, "cover_winter", 0.0, false);
    g.impervious_fraction = number(e, "impervious_fraction", 0.0, false);
    b.hrus.push_back(g);
  }
  if (!j.contains("index_hru")) throw ConfigError("basin file needs 'index_hru' (HRU id of the temperature station)");
  b.index_hru = b.position_of(j["index_hru"].get<int>());
  b.validate();
  return b;
}

Basin load_basin(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open basin file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_basin(ss.str());
}

}  // namespace prmsda

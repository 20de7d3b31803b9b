#include "prmsda/snowpack.hpp"

#include <algorithm>
#include <cmath>

#include "prmsda/errors.hpp"

namespace prmsda {

double blackbody_emission(double temp_c) {
  const double k = temp_c + 273.16;
  return 5.85e-8 * k * k * k * k;
}

double conduction_flux(double density, double air_c, double pack_c, const SnowOptions& opts) {
  const double sigma = opts.ice_specific_heat;
  const double rho = std::max(density, 0.0);
  if (rho <= 0.0) return 0.0;
  const double conductance = 2.0 * 0.5 * sigma * std::sqrt(0.0077 * rho * rho * opts.period_seconds / (sigma * rho));
  return conductance * (air_c - pack_c);
}

double snow_albedo(double days_since_snow, bool melt_season, const SnowOptions& opts) {
  const AlbedoCurve& c = melt_season ? opts.melt : opts.accumulation;
  const double a = c.min + (c.max - c.min) * std::exp(-c.decay * std::max(days_since_snow, 0.0));
  return std::clamp(a, 0.0, 1.0);
}

EnergyTerms surface_energy(double air_c, double shortwave, double albedo, double transmission, double cover,
                           double emissivity, double convection_coef, double pack_c, double density,
                           const SnowOptions& opts) {
  EnergyTerms e;
  e.albedo = albedo;
  e.net_shortwave = (1.0 - albedo) * transmission * shortwave;
  e.blackbody = blackbody_emission(air_c);
  e.longwave_in = cover * e.blackbody + (1.0 - cover) * emissivity * e.blackbody;
  e.convection = convection_coef * air_c;
  e.balance = e.longwave_in - blackbody_emission(pack_c) + e.convection + e.net_shortwave;
  if (e.balance < 0.0) {
    e.conduction = conduction_flux(density, air_c, pack_c, opts);
    e.applied = e.conduction;
  } else {
    e.applied = e.balance;
  }
  return e;
}

MeltResult apply_energy(double energy, double fsca, SnowWater& w, double heat_cap) {
  MeltResult r;
  if (energy > 0.0) {
    const double used = std::min(w.heat, energy);
    w.heat -= used;
    const double rest = energy - used;
    r.potential_melt = rest / kLatentHeatPerInch * fsca;
    r.melt = std::min(r.potential_melt, w.ice);
    w.ice -= r.melt;
    w.liquid += r.melt;
  } else if (energy < 0.0) {
    double cold = -energy;
    r.refrozen = std::min(w.liquid, cold / kLatentHeatPerInch);
    w.liquid -= r.refrozen;
    w.ice += r.refrozen;
    cold -= r.refrozen * kLatentHeatPerInch;
    w.heat = std::max(w.heat, std::min(w.heat + cold, heat_cap));
  }
  return r;
}

double drain_free_water(SnowWater& w, double free_water_fraction) {
  const double capacity = free_water_fraction * w.ice;
  if (w.liquid <= capacity) return 0.0;
  const double out = w.liquid - capacity;
  w.liquid = capacity;
  return out;
}

void add_snowfall(SnowWater& w, double snow, double air_c) {
  if (snow <= 0.0) return;
  w.ice += snow;
  w.heat += std::max(0.0, -air_c) * snow * kIceHeatPerInch;
}

void add_rain_to_pack(SnowWater& w, double rain, double air_c) {
  if (rain <= 0.0) return;
  double sensible = std::max(air_c, 0.0) * rain * kWaterHeatPerInch;
  const double warmed = std::min(w.heat, sensible);
  w.heat -= warmed;
  sensible -= warmed;
  if (sensible > 0.0) {
    const double melt = std::min(w.ice, sensible / kLatentHeatPerInch);
    w.ice -= melt;
    w.liquid += melt;
  }
  const double refreeze = std::min(rain, w.heat / kLatentHeatPerInch);
  w.heat -= refreeze * kLatentHeatPerInch;
  w.heat = std::max(w.heat, 0.0);
  w.ice += refreeze;
  w.liquid += rain - refreeze;
}

double sublimate(SnowWater& w, double demand, double xi, double fsca, double pack_c) {
  const double b = std::min(xi * std::max(demand, 0.0) * fsca, w.swe());
  if (b <= 0.0) return 0.0;
  const double from_ice = std::min(b, w.ice);
  w.ice -= from_ice;
  w.liquid = std::max(0.0, w.liquid - (b - from_ice));
  w.heat -= std::min(w.heat, std::abs(std::min(pack_c, 0.0)) * kIceHeatPerInch * b);
  return b;
}

double depth_change(double new_snow, double swe, double depth, double den_init, double den_max, double settle) {
  return new_snow / den_init + settle * ((swe + new_snow) / den_max - depth);
}

double snow_covered_area(double swe, double swe_track, double swe_threshold, std::span<const double> curve) {
  if (curve.size() < 2) throw ConfigError("depletion curve needs at least two points");
  if (swe <= 0.0) return 0.0;
  if (swe >= swe_threshold) return 1.0;
  const double track = std::max(swe_track, swe);
  const double x = std::clamp(swe / track, 0.0, 1.0) * static_cast<double>(curve.size() - 1);
  const std::size_t i = std::min(static_cast<std::size_t>(x), curve.size() - 2);
  const double t = x - static_cast<double>(i);
  return std::clamp(curve[i] + t * (curve[i + 1] - curve[i]), 0.0, 1.0);
}

double pack_temperature_c(double heat, double swe, double max_cold_c) {
  if (swe <= 0.0 || heat <= 0.0) return 0.0;
  return -std::min(heat / (kIceHeatPerInch * swe), max_cold_c);
}

namespace {

double cold_content_at(double swe, double air_c, double max_cold_c) {
  return kIceHeatPerInch * swe * std::min(max_cold_c, std::max(0.0, -air_c));
}

void accumulate(EnergyTerms& sum, const EnergyTerms& e) {
  sum.net_shortwave += e.net_shortwave;
  sum.longwave_in += e.longwave_in;
  sum.blackbody += e.blackbody;
  sum.convection += e.convection;
  sum.conduction += e.conduction;
  sum.balance += e.balance;
  sum.applied += e.applied;
  sum.albedo = e.albedo;
}

void clear_pack(HruState& s) {
  s.ice = s.free_water = s.swe = 0.0;
  s.depth = s.density = s.heat_deficit = 0.0;
  s.pack_temp = 32.0;
  s.fsca = 0.0;
  s.swe_max_track = 0.0;
}

}  // namespace

SnowDayOutput snowpack_step(HruState& s, const SnowDayInput& in, const SnowParams& p, const SnowOptions& opts) {
  SnowDayOutput out;
  SnowWater w{s.ice, s.free_water, s.heat_deficit};
  const double swe_start = w.swe();
  const double tavg_c = 0.5 * (in.tmax_c + in.tmin_c);

  if (in.net_snow > 0.0) {
    add_snowfall(w, in.net_snow, tavg_c);
    s.days_since_snow = 0.0;
  } else {
    s.days_since_snow += 1.0;
  }
  if (w.swe() > 0.0) {
    add_rain_to_pack(w, in.net_rain, tavg_c);
  } else {
    out.rain_bypass = in.net_rain;
    clear_pack(s);
    return out;
  }
  const double supplied = w.swe();

  s.swe_max_track = std::max(s.swe_max_track, w.swe());
  const double fsca = snow_covered_area(w.swe(), s.swe_max_track, p.snarea_thresh, p.depletion);
  const double albedo = snow_albedo(s.days_since_snow, in.melt_season, opts);
  const double density = s.density > 0.0 ? s.density : p.den_init;
  const double emissivity = in.precip > 0.0 ? 1.0 : p.emis_noppt;
  const double periods[2] = {0.5 * (tavg_c + in.tmax_c), 0.5 * (tavg_c + in.tmin_c)};

  out.outflow += drain_free_water(w, opts.free_water_fraction);
  for (double air_c : periods) {
    if (w.swe() <= opts.melt_out_threshold) break;
    const double pack_c = pack_temperature_c(w.heat, w.swe(), opts.max_pack_cold_c);
    const EnergyTerms e = surface_energy(air_c, 0.5 * in.shortwave, albedo, p.rad_trncf, in.cover, emissivity,
                                         p.cecn_coef, pack_c, density, opts);
    accumulate(out.energy, e);
    const double limit = cold_content_at(w.swe(), air_c, opts.max_pack_cold_c);
    if (e.balance >= 0.0) {
      apply_energy(e.applied, fsca, w, limit);
    } else if (e.applied < 0.0) {
      apply_energy(e.applied, fsca, w, std::max(w.heat, limit));
    } else if (w.heat > limit) {
      // Conduction from warmer air only warms the pack; it cannot melt.
      w.heat = std::max(limit, w.heat - e.applied);
    }
    out.outflow += drain_free_water(w, opts.free_water_fraction);
  }

  const double pack_c = pack_temperature_c(w.heat, w.swe(), opts.max_pack_cold_c);
  out.sublimation = sublimate(w, in.et_available, p.potet_sublim, fsca, pack_c);
  out.outflow += drain_free_water(w, opts.free_water_fraction);

  if (w.swe() <= opts.melt_out_threshold) {
    out.outflow += w.swe();
    clear_pack(s);
    return out;
  }

  double depth = s.depth + depth_change(in.net_snow, swe_start, s.depth, p.den_init, p.den_max, p.settle_const);
  depth = std::max(depth, 0.0);
  if (w.swe() < supplied) depth *= w.swe() / supplied;
  depth = std::max(depth, w.swe());

  const double swe = w.swe();
  s.ice = w.ice;
  s.free_water = w.liquid;
  s.swe = swe;
  s.heat_deficit = std::clamp(w.heat, 0.0, kIceHeatPerInch * swe * opts.max_pack_cold_c);
  s.pack_temp = 32.0 + 1.8 * pack_temperature_c(s.heat_deficit, swe, opts.max_pack_cold_c);
  s.depth = depth;
  s.density = swe / depth;
  s.fsca = snow_covered_area(swe, s.swe_max_track, p.snarea_thresh, p.depletion);
  return out;
}

}  // namespace prmsda

/**
 * @file snowpack.hpp
 * @brief Snowpack energy and mass balance.
 *
 * The pack is a surface layer exchanging energy with the atmosphere twice a
 * day and a lower layer tracked by its heat deficit H (Langleys needed to
 * bring it to 0 degC). Water is split into ice and free (liquid) water.
 * Constants: 203.2 Langleys melt one inch of ice; 1.27 Langleys warm one
 * inch of ice by 1 degC; 2.54 Langleys warm one inch of water by 1 degC.
 */
#pragma once

#include <span>

#include "prmsda/types.hpp"

namespace prmsda {

inline constexpr double kLatentHeatPerInch = 203.2;
inline constexpr double kIceHeatPerInch = 1.27;
inline constexpr double kWaterHeatPerInch = 2.54;
inline constexpr std::size_t kDepletionPoints = 11;

struct AlbedoCurve {
  double max = 0.9;
  double min = 0.4;
  double decay = 0.2;  ///< per day since the last snowfall
};

struct SnowOptions {
  double free_water_fraction = 0.05;   ///< liquid holding capacity as a fraction of ice
  double ice_specific_heat = 0.5;      ///< cal g^-1 degC^-1
  double period_seconds = 43200.0;     ///< length of each half-day energy period
  double max_pack_cold_c = 50.0;
  double melt_out_threshold = 1.0e-9;  ///< packs below this SWE are released as outflow
  AlbedoCurve accumulation{0.9, 0.4, 0.2};
  AlbedoCurve melt{0.8, 0.35, 0.3};
  unsigned melt_season_start_month = 3;  ///< albedo uses the melt curve from this date ...
  unsigned melt_season_start_day = 1;
  unsigned melt_season_end_month = 9;    ///< ... through this date (inclusive)
  unsigned melt_season_end_day = 30;
};

struct EnergyTerms {
  double net_shortwave = 0.0;  ///< R
  double longwave_in = 0.0;    ///< I
  double blackbody = 0.0;      ///< Ip at air temperature
  double convection = 0.0;     ///< Qv
  double conduction = 0.0;     ///< Qc (zero unless the surface balance is negative)
  double balance = 0.0;        ///< Delta E = I - Ip(pack) + Qv + R
  double applied = 0.0;        ///< energy delivered to the pack: balance, or Qc when balance < 0
  double albedo = 0.0;
};

/// Black-body emission over one half-day period, Langleys.
double blackbody_emission(double temp_c);

/// Conductive exchange between surface and pack over one period.
double conduction_flux(double density, double air_c, double pack_c, const SnowOptions& opts);

double snow_albedo(double days_since_snow, bool melt_season, const SnowOptions& opts);

/// Surface energy balance for one period. `shortwave` is the period's share of Rsw.
EnergyTerms surface_energy(double air_c, double shortwave, double albedo, double transmission, double cover,
                           double emissivity, double convection_coef, double pack_c, double density,
                           const SnowOptions& opts);

/// Mutable water/heat content of a pack.
struct SnowWater {
  double ice = 0.0;
  double liquid = 0.0;
  double heat = 0.0;
  double swe() const { return ice + liquid; }
};

struct MeltResult {
  double potential_melt = 0.0;  ///< inches of melt the remaining energy could produce
  double melt = 0.0;            ///< ice converted to liquid
  double refrozen = 0.0;        ///< liquid converted to ice
};

/**
 * Positive energy first satisfies the heat deficit, the rest melts
 * (energy / 203.2) * fsca inches of ice. Negative energy refreezes liquid,
 * then raises H up to `heat_cap`.
 */
MeltResult apply_energy(double energy, double fsca, SnowWater& w, double heat_cap);

/// Liquid above the holding capacity leaves the pack; returns the outflow.
double drain_free_water(SnowWater& w, double free_water_fraction);

/// Adds snowfall at air temperature `air_c`.
void add_snowfall(SnowWater& w, double snow, double air_c);

/// Rain joining an existing pack: its sensible heat lowers H (surplus melts
/// ice), then it refreezes until H is exhausted; the rest becomes liquid.
void add_rain_to_pack(SnowWater& w, double rain, double air_c);

/// B = xi * demand * fsca capped at SWE, taken from ice then liquid; H
/// loses the cold content of the removed mass. Returns B.
double sublimate(SnowWater& w, double demand, double xi, double fsca, double pack_c);

/// Daily depth change: Pns/rho_init + tau * ((SWE + Pns)/rho_max - D).
double depth_change(double new_snow, double swe, double depth, double den_init, double den_max, double settle);

/// Fractional snow-covered area from the 11-point depletion curve.
double snow_covered_area(double swe, double swe_track, double swe_threshold, std::span<const double> curve);

/// Pack temperature (degC, <= 0) implied by the heat deficit.
double pack_temperature_c(double heat, double swe, double max_cold_c);

struct SnowDayInput {
  double net_rain = 0.0;
  double net_snow = 0.0;
  double precip = 0.0;  ///< gross precipitation (selects emissivity)
  double tmax_c = 0.0;
  double tmin_c = 0.0;
  double shortwave = 0.0;  ///< daily Rsw
  double cover = 0.0;      ///< canopy density used as the longwave cover fraction
  double et_available = 0.0;
  bool melt_season = false;
};

struct SnowParams {
  double rad_trncf = 0.5;
  double emis_noppt = 0.757;
  double cecn_coef = 5.0;
  double potet_sublim = 0.5;
  double den_init = 0.1;
  double den_max = 0.6;
  double settle_const = 0.1;
  double snarea_thresh = 15.0;
  std::span<const double> depletion;
};

struct SnowDayOutput {
  double rain_bypass = 0.0;  ///< rain that fell where no pack existed
  double outflow = 0.0;      ///< liquid leaving the pack
  double sublimation = 0.0;
  EnergyTerms energy;        ///< summed over both periods
};

/// Full daily snowpack update of the snow fields of `s`.
SnowDayOutput snowpack_step(HruState& s, const SnowDayInput& in, const SnowParams& p, const SnowOptions& opts);

}  // namespace prmsda

/**
 * @file soil_routing.hpp
 * @brief Impervious store, soil zone, surface runoff and reservoir routing.
 *
 * Water entering these functions is in inches; the caller decides whether a
 * depth is over the whole HRU or over its pervious part.
 */
#pragma once

#include <span>

namespace prmsda {

struct ImperviousResult {
  double runoff = 0.0;   ///< Fsri
  double evap = 0.0;     ///< ei
  double storage = 0.0;  ///< Simp after the step
};

/// Fills the store up to `capacity`, spills the excess, then evaporates
/// min(evap_demand, storage).
ImperviousResult impervious_step(double inflow, double storage, double capacity, double evap_demand);

/**
 * Contributing-area fraction min(coef * 10^(exponent * x), cap).
 * Default x = soil_moisture + 0.5 * net_precip; with `product_exponent`
 * the exponent is exponent * soil_moisture * 0.5 * net_precip instead.
 */
double contributing_area(double coef, double exponent, double soil_moisture, double net_precip, double cap,
                         bool product_exponent = false);

struct SoilZoneResult {
  double to_groundwater = 0.0;  ///< Fsz_gw
  double to_subsurface = 0.0;
  double et = 0.0;
  double recharge = 0.0;        ///< Ssre after the step
  double moisture = 0.0;        ///< Ssz after the step (includes the recharge zone)
};

/// Infiltration fills the recharge zone and the whole soil column up to
/// their capacities; excess percolates (at most `soil2gw_max` to groundwater,
/// the rest to the subsurface reservoir). ET drains the recharge zone first,
/// then the lower zone, limited by `et_demand`.
SoilZoneResult soil_zone_step(double infiltration, double et_demand, double recharge, double moisture,
                              double moisture_max, double recharge_max, double soil2gw_max);

struct SubsurfaceResult {
  double flow = 0.0;      ///< Fss
  double to_gw = 0.0;     ///< Fss_gw
  double storage = 0.0;
};

/// Fss = lin * S + sq * S^2 and Fss_gw = rate * (S / smax)^exp on S = storage + inflow,
/// each capped by what remains.
SubsurfaceResult subsurface_step(double storage, double inflow, double lin, double sq, double gw_rate, double gw_exp,
                                 double smax);

struct GroundwaterResult {
  double flow = 0.0;   ///< Fgw
  double sink = 0.0;   ///< Fgsnk
  double storage = 0.0;
};

/// Linear reservoir with a sink; outflows scaled back if they exceed storage.
GroundwaterResult groundwater_step(double storage, double inflow, double flow_coef, double sink_coef);

/// Area-weighted mean of per-HRU flows (inches/day). Throws ConfigError on zero total area.
double basin_streamflow(std::span<const double> flows, std::span<const double> areas);

/// acre-inches/day to cubic feet per second.
inline constexpr double kAcreInchPerDayToCfs = 43560.0 / 12.0 / 86400.0;

}  // namespace prmsda

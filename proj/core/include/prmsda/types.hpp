/**
 * @file types.hpp
 * @brief Core domain records: HRU geometry, prognostic HRU state, daily fluxes.
 *
 * Units follow the native model conventions: inches of water, degrees
 * Fahrenheit, Langleys (cal/cm^2), acres and feet.
 */
#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace prmsda {

/// Static description of one Hydrologic Response Unit.
struct HruGeometry {
  int id = 0;
  double area_acres = 1.0;
  double elevation_ft = 0.0;
  double slope = 0.0;  ///< rise/run
  double latitude_deg = 40.0;
  double cover_summer = 0.0;  ///< canopy density, summer
  double cover_winter = 0.0;  ///< canopy density, winter
  double impervious_fraction = 0.0;
};

/// Throws ConfigError naming the HRU and field if an invariant is broken.
void validate_geometry(const HruGeometry& g);

/**
 * Prognostic state of one HRU.
 *
 * Storage conventions:
 *  - interception is depth over the canopy-covered area,
 *  - soil storages are depth over the pervious area,
 *  - every other storage is depth over the whole HRU.
 */
struct HruState {
  double interception = 0.0;  ///< Sint, inches
  double free_water = 0.0;    ///< Sliq, inches
  double density = 0.0;       ///< rho, g/cm^3
  double swe = 0.0;           ///< inches
  double ice = 0.0;           ///< Sice, inches
  double depth = 0.0;         ///< D, inches
  double heat_deficit = 0.0;  ///< H, Langleys
  double pack_temp = 32.0;    ///< Tpk, degF
  double fsca = 0.0;          ///< fractional snow-covered area
  double impervious = 0.0;    ///< Simp, inches
  double soil_recharge = 0.0; ///< Ssre, inches
  double soil_moisture = 0.0; ///< Ssz, inches (includes recharge zone)

  double subsurface = 0.0;    ///< Sss, inches
  double groundwater = 0.0;   ///< Sgw, inches
  double swe_max_track = 0.0; ///< pst: seasonal SWE maximum, inches
  double days_since_snow = 0.0;

  bool operator==(const HruState&) const = default;
};

/// The 12 per-HRU state slots exposed to the assimilation vector, in layout order.
enum class StateField : std::size_t {
  Interception,
  FreeWater,
  Density,
  Swe,
  Ice,
  Depth,
  HeatDeficit,
  PackTemp,
  Fsca,
  Impervious,
  SoilRecharge,
  SoilMoisture,
};

inline constexpr std::size_t kFilteredStateCount = 12;

/// Every serialized HruState field (filtered slots first, then carried storages).
inline constexpr std::array<std::string_view, 16> kStateFieldNames = {
    "intcp_stor", "freeh2o",   "pk_den",     "pkwater_equiv", "pk_ice",     "pk_depth",
    "pk_def",     "pk_temp",   "snowcov_area", "imperv_stor", "soil_rechr", "soil_moist",
    "ssres_stor", "gwres_stor", "pst",       "days_since_snow"};

double& field(HruState& s, std::size_t index);
double field(const HruState& s, std::size_t index);
inline double& field(HruState& s, StateField f) { return field(s, static_cast<std::size_t>(f)); }
inline double field(const HruState& s, StateField f) { return field(s, static_cast<std::size_t>(f)); }

std::optional<std::size_t> state_field_index(std::string_view name);

/// Per-HRU daily fluxes. Water terms in inches over the HRU, energy in Langleys.
struct FluxRecord {
  double precip = 0.0;
  double net_precip = 0.0;     ///< Pn
  double throughfall = 0.0;    ///< Pt
  double net_rain = 0.0;       ///< Pnr
  double net_snow = 0.0;       ///< Pns
  double canopy_evap = 0.0;
  double melt = 0.0;           ///< water leaving the snowpack (M)
  double sublimation = 0.0;    ///< B
  double impervious_evap = 0.0;///< ei
  double soil_et = 0.0;
  double surface_runoff = 0.0; ///< Fsr
  double subsurface_flow = 0.0;///< Fss
  double ssr_to_gw = 0.0;      ///< Fss_gw
  double soil_to_gw = 0.0;     ///< Fsz_gw
  double groundwater_flow = 0.0; ///< Fgw
  double groundwater_sink = 0.0; ///< Fgsnk
  double potential_et = 0.0;
  double actual_et = 0.0;

  double shortwave = 0.0;      ///< Rsw
  double energy_balance = 0.0; ///< Delta E summed over the two half-day periods
  double longwave_in = 0.0;    ///< I
  double convection = 0.0;     ///< Qv
  double net_shortwave = 0.0;  ///< R
  double conduction = 0.0;     ///< Qc
  double blackbody = 0.0;      ///< Ip

  double residual = 0.0;       ///< water-balance residual, inches

  double streamflow() const { return surface_runoff + subsurface_flow + groundwater_flow; }
};

}  // namespace prmsda

/**
 * @file canopy.hpp
 * @brief Vegetation interception, throughfall and canopy evaporation.
 *
 * Canopy storage is a depth over the canopy-covered part of the HRU; the
 * HRU-average equivalent is cover * storage.
 */
#pragma once

namespace prmsda {

struct CanopyResult {
  double net_precip = 0.0;   ///< Pn, HRU-average inches reaching the ground
  double throughfall = 0.0;  ///< Pt, inches passing a filled canopy (canopy-area depth)
  double net_rain = 0.0;     ///< Pnr
  double net_snow = 0.0;     ///< Pns
  double storage = 0.0;      ///< new canopy storage (canopy-area depth)
};

/**
 * Intercepts the rain part (fraction `rain_frac` of `precip`) against
 * `rain_capacity` and then the snow part against `snow_capacity`, both
 * sharing one storage. Throughfall and uncovered precipitation make up Pn.
 */
CanopyResult intercept(double precip, double rain_frac, double storage, double cover, double rain_capacity,
                       double snow_capacity);

struct CanopyEvaporation {
  double depleted = 0.0;  ///< canopy-area depth removed
  double storage = 0.0;
};

/// Evaporates/sublimates min(storage, demand) from the canopy.
CanopyEvaporation canopy_evaporate(double storage, double demand);

struct CanopyTransfer {
  double storage = 0.0;   ///< canopy-area depth under the new cover
  double released = 0.0;  ///< HRU-average inches dropped to the ground
};

/// Re-expresses storage when cover density changes between seasons; water
/// the new canopy cannot hold (above `capacity`) falls to the ground.
CanopyTransfer canopy_cover_change(double storage, double old_cover, double new_cover, double capacity);

}  // namespace prmsda

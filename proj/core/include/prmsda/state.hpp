#pragma once

#include <cstddef>

#include "prmsda/parameters.hpp"
#include "prmsda/types.hpp"

namespace prmsda {

/// Basin-wide caps for storages the parameter table does not bound.
struct StateBoundsConfig {
  double storage_cap = 1.0e4;     ///< SWE, depth, Sss, Sgw, pst (inches)
  double max_pack_cold_c = 50.0;  ///< heat deficit limited to a pack this far below 0 degC
  double fallback_density = 0.3;  ///< density used when a pack appears with no depth
  double recharge_fraction = 0.4; ///< recharge-zone capacity as a fraction of soilmoist_max
};

/// Per-HRU legal ranges of every state field.
struct HruStateBounds {
  double interception_max = 1.0;
  double swe_max = 1.0e4;
  double depth_max = 1.0e4;
  double impervious_max = 0.1;
  double soil_moisture_max = 60.0;
  double soil_recharge_max = 24.0;
  double subsurface_max = 1.0e4;
  double groundwater_max = 1.0e4;
  double pst_max = 1.0e4;
  double pack_temp_min_f = 32.0 - 1.8 * 50.0;
  double max_pack_cold_c = 50.0;
  double fallback_density = 0.3;
};

HruStateBounds state_bounds(const HruGeometry& geometry, const ParameterSet& params, std::size_t hru,
                            const StateBoundsConfig& config = {});

/**
 * Hard boundary check. Every field is brought inside its bounds; fields
 * that are already valid keep their exact value. The snowpack is kept
 * self-consistent: ice + liquid = SWE (liquid rescaled proportionally),
 * an empty pack is fully cleared, depth >= SWE and density = SWE / depth.
 * Idempotent.
 */
HruState clamp_state(const HruState& s, const HruStateBounds& bounds);

/// True when `s` already satisfies every bound (clamp_state would not change it).
bool within_bounds(const HruState& s, const HruStateBounds& bounds);

}  // namespace prmsda

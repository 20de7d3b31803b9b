#include "prmsda/canopy.hpp"

#include <algorithm>

namespace prmsda {

CanopyResult intercept(double precip, double rain_frac, double storage, double cover, double rain_capacity,
                       double snow_capacity) {
  const double rain = precip * rain_frac;
  const double snow = precip - rain;
  CanopyResult r;
  r.storage = storage;
  if (cover <= 0.0) {
    r.net_precip = precip;
    r.net_rain = rain;
    r.net_snow = snow;
    return r;
  }
  double stored = storage;
  const double rain_held = std::min(rain, std::max(0.0, rain_capacity - stored));
  stored += rain_held;
  const double snow_held = std::min(snow, std::max(0.0, snow_capacity - stored));
  stored += snow_held;

  const double rain_through = rain - rain_held;
  const double snow_through = snow - snow_held;
  r.throughfall = rain_through + snow_through;
  r.net_rain = cover * rain_through + (1.0 - cover) * rain;
  r.net_snow = cover * snow_through + (1.0 - cover) * snow;
  r.net_precip = r.net_rain + r.net_snow;
  r.storage = stored;
  return r;
}

CanopyEvaporation canopy_evaporate(double storage, double demand) {
  CanopyEvaporation e;
  e.depleted = std::min(storage, std::max(demand, 0.0));
  e.storage = storage - e.depleted;
  return e;
}

CanopyTransfer canopy_cover_change(double storage, double old_cover, double new_cover, double capacity) {
  const double water = old_cover * storage;
  CanopyTransfer t;
  if (new_cover == old_cover && storage <= capacity) {
    t.storage = storage;
    return t;
  }
  if (new_cover <= 0.0) {
    t.released = water;
    return t;
  }
  const double spread = water / new_cover;
  const double cap = std::max(capacity, 0.0);
  if (spread <= cap) {
    t.storage = spread;  // nothing spills; avoids a rounding-sized negative release
  } else {
    t.storage = cap;
    t.released = std::max(0.0, water - new_cover * cap);
  }
  return t;
}

}  // namespace prmsda

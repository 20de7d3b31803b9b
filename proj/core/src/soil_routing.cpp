#include "prmsda/soil_routing.hpp"

#include <algorithm>
#include <cmath>

#include "prmsda/errors.hpp"

namespace prmsda {

ImperviousResult impervious_step(double inflow, double storage, double capacity, double evap_demand) {
  ImperviousResult r;
  double s = storage + std::max(inflow, 0.0);
  const double cap = std::max(capacity, 0.0);
  if (s > cap) {
    r.runoff = s - cap;
    s = cap;
  }
  r.evap = std::min(s, std::max(evap_demand, 0.0));
  r.storage = s - r.evap;
  return r;
}

double contributing_area(double coef, double exponent, double soil_moisture, double net_precip, double cap,
                         bool product_exponent) {
  const double x = product_exponent ? exponent * soil_moisture * 0.5 * net_precip
                                    : exponent * (soil_moisture + 0.5 * net_precip);
  return std::min(coef * std::pow(10.0, x), cap);
}

SoilZoneResult soil_zone_step(double infiltration, double et_demand, double recharge, double moisture,
                              double moisture_max, double recharge_max, double soil2gw_max) {
  SoilZoneResult r;
  double ssz = moisture;
  double ssre = recharge;
  const double in = std::max(infiltration, 0.0);
  const double stored = std::min(in, std::max(0.0, moisture_max - ssz));
  ssz += stored;
  ssre += std::min(stored, std::max(0.0, recharge_max - ssre));
  const double excess = in - stored;
  r.to_groundwater = std::min(excess, std::max(soil2gw_max, 0.0));
  r.to_subsurface = excess - r.to_groundwater;

  const double demand = std::max(et_demand, 0.0);
  const double from_recharge = std::min(demand, ssre);
  ssre -= from_recharge;
  const double from_lower = std::min(demand - from_recharge, std::max(0.0, ssz - from_recharge - ssre));
  r.et = from_recharge + from_lower;
  ssz = std::max(0.0, ssz - r.et);
  r.recharge = std::min(ssre, ssz);
  r.moisture = ssz;
  return r;
}

SubsurfaceResult subsurface_step(double storage, double inflow, double lin, double sq, double gw_rate, double gw_exp,
                                 double smax) {
  SubsurfaceResult r;
  const double s = storage + std::max(inflow, 0.0);
  if (s <= 0.0) return r;
  r.flow = std::min(lin * s + sq * s * s, s);
  const double gw = smax > 0.0 ? gw_rate * std::pow(s / smax, gw_exp) : 0.0;
  r.to_gw = std::min(gw, s - r.flow);
  r.storage = s - r.flow - r.to_gw;
  return r;
}

GroundwaterResult groundwater_step(double storage, double inflow, double flow_coef, double sink_coef) {
  GroundwaterResult r;
  const double s = storage + std::max(inflow, 0.0);
  double flow = flow_coef * s;
  double sink = sink_coef * s;
  const double total = flow + sink;
  if (total > s && total > 0.0) {
    flow = s * flow / total;
    sink = s - flow;
  }
  r.flow = flow;
  r.sink = sink;
  r.storage = std::max(0.0, s - flow - sink);
  return r;
}

double basin_streamflow(std::span<const double> flows, std::span<const double> areas) {
  if (flows.size() != areas.size()) throw ConfigError("basin_streamflow: flow/area length mismatch");
  double area = 0.0;
  double volume = 0.0;
  for (std::size_t i = 0; i < flows.size(); ++i) {
    area += areas[i];
    volume += flows[i] * areas[i];
  }
  if (!(area > 0.0)) throw ConfigError("basin has zero total area");
  return volume / area;
}

}  // namespace prmsda

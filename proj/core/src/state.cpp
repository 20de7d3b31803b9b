#include "prmsda/state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "prmsda/errors.hpp"

namespace prmsda {

double& field(HruState& s, std::size_t index) {
  switch (index) {
    case 0: return s.interception;
    case 1: return s.free_water;
    case 2: return s.density;
    case 3: return s.swe;
    case 4: return s.ice;
    case 5: return s.depth;
    case 6: return s.heat_deficit;
    case 7: return s.pack_temp;
    case 8: return s.fsca;
    case 9: return s.impervious;
    case 10: return s.soil_recharge;
    case 11: return s.soil_moisture;
    case 12: return s.subsurface;
    case 13: return s.groundwater;
    case 14: return s.swe_max_track;
    case 15: return s.days_since_snow;
    default: throw std::out_of_range("state field index " + std::to_string(index));
  }
}

double field(const HruState& s, std::size_t index) { return field(const_cast<HruState&>(s), index); }

std::optional<std::size_t> state_field_index(std::string_view name) {
  for (std::size_t i = 0; i < kStateFieldNames.size(); ++i) {
    if (kStateFieldNames[i] == name) return i;
  }
  return std::nullopt;
}

void validate_geometry(const HruGeometry& g) {
  const auto fail = [&](const char* what) {
    throw ConfigError("HRU " + std::to_string(g.id) + ": " + what);
  };
  if (!(g.area_acres > 0.0) || !std::isfinite(g.area_acres)) fail("area must be positive");
  if (!std::isfinite(g.elevation_ft)) fail("elevation missing or not finite");
  if (!std::isfinite(g.slope) || g.slope < 0.0) fail("slope must be finite and non-negative");
  if (!(g.latitude_deg >= -90.0 && g.latitude_deg <= 90.0)) fail("latitude out of range");
  if (!(g.cover_summer >= 0.0 && g.cover_summer <= 1.0)) fail("summer cover density outside [0,1]");
  if (!(g.cover_winter >= 0.0 && g.cover_winter <= 1.0)) fail("winter cover density outside [0,1]");
  if (!(g.impervious_fraction >= 0.0 && g.impervious_fraction <= 0.999)) {
    fail("impervious fraction outside [0,0.999]");
  }
}

HruStateBounds state_bounds(const HruGeometry& geometry, const ParameterSet& params, std::size_t hru,
                            const StateBoundsConfig& config) {
  HruStateBounds b;
  b.interception_max = std::max({params.value(ParamId::SrainIntcp, hru), params.value(ParamId::WrainIntcp, hru),
                                 params.value(ParamId::SnowIntcp, hru)});
  b.swe_max = config.storage_cap;
  b.depth_max = config.storage_cap;
  b.impervious_max = params.value(ParamId::ImpervStorMax, hru) * geometry.impervious_fraction;
  b.soil_moisture_max = params.value(ParamId::SoilmoistMax, hru);
  b.soil_recharge_max = config.recharge_fraction * b.soil_moisture_max;
  b.subsurface_max = config.storage_cap;
  b.groundwater_max = config.storage_cap;
  b.pst_max = config.storage_cap;
  b.max_pack_cold_c = config.max_pack_cold_c;
  b.pack_temp_min_f = 32.0 - 1.8 * config.max_pack_cold_c;
  b.fallback_density = config.fallback_density;
  return b;
}

namespace {

double clip(double v, double lo, double hi) {
  if (std::isnan(v)) return lo;
  return std::clamp(v, lo, hi);
}

bool same_within(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

}  // namespace

HruState clamp_state(const HruState& s, const HruStateBounds& b) {
  HruState c = s;
  c.interception = clip(s.interception, 0.0, b.interception_max);
  c.swe = clip(s.swe, 0.0, b.swe_max);
  c.ice = clip(s.ice, 0.0, b.swe_max);
  c.free_water = clip(s.free_water, 0.0, b.swe_max);

  if (c.swe == 0.0) {
    c.ice = c.free_water = 0.0;
    c.depth = c.density = c.heat_deficit = 0.0;
    c.pack_temp = 32.0;
    c.fsca = 0.0;
  } else {
    const double sum = c.ice + c.free_water;
    if (!same_within(sum, c.swe)) {
      if (sum > 0.0) {
        const double liquid = std::min(c.free_water * (c.swe / sum), c.swe);
        c.free_water = liquid;
        c.ice = c.swe - liquid;
      } else {
        c.ice = c.swe;
        c.free_water = 0.0;
      }
    }
    double depth = clip(s.depth, 0.0, b.depth_max);
    if (depth <= 0.0) depth = std::min(c.swe / b.fallback_density, b.depth_max);
    if (depth < c.swe) depth = c.swe;
    c.depth = depth;
    const double rho = c.swe / c.depth;
    if (!same_within(s.density, rho)) c.density = rho;
    c.heat_deficit = clip(s.heat_deficit, 0.0, 1.27 * c.swe * b.max_pack_cold_c);
    c.pack_temp = clip(s.pack_temp, b.pack_temp_min_f, 32.0);
    c.fsca = clip(s.fsca, 0.0, 1.0);
  }

  c.impervious = clip(s.impervious, 0.0, b.impervious_max);
  c.soil_moisture = clip(s.soil_moisture, 0.0, b.soil_moisture_max);
  c.soil_recharge = clip(s.soil_recharge, 0.0, std::min(b.soil_recharge_max, c.soil_moisture));
  c.subsurface = clip(s.subsurface, 0.0, b.subsurface_max);
  c.groundwater = clip(s.groundwater, 0.0, b.groundwater_max);
  c.swe_max_track = clip(std::max(s.swe_max_track, c.swe), 0.0, b.pst_max);
  c.days_since_snow = clip(s.days_since_snow, 0.0, 1.0e6);
  return c;
}

bool within_bounds(const HruState& s, const HruStateBounds& b) { return clamp_state(s, b) == s; }

}  // namespace prmsda

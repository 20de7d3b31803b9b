#include <cmath>
#include <vector>

#include "doctest.h"
#include "prmsda/errors.hpp"
#include "prmsda/model.hpp"
#include "support.hpp"

using namespace prmsda;

namespace {

// Same canopy in both seasons so storage bookkeeping does not depend on the date.
Basin flat_cover_basin(std::size_t n) {
  Basin b = testing::basin(n);
  for (auto& g : b.hrus) g.cover_winter = g.cover_summer;
  return b;
}

ClimateForcing day(Date d, double tmax, double tmin, std::vector<double> precip) {
  ClimateForcing f;
  f.date = d;
  f.tmax_station = tmax;
  f.tmin_station = tmin;
  f.precip = std::move(precip);
  return f;
}

// Water held by one HRU, written out independently of the model's own bookkeeping.
double held(const HruState& s, const HruGeometry& g) {
  return g.cover_summer * s.interception + s.ice + s.free_water + s.impervious +
         (1.0 - g.impervious_fraction) * s.soil_moisture + s.subsurface + s.groundwater;
}

// Area-weighted residual of the basin for one day.
double basin_residual(const Basin& b, const std::vector<HruState>& before, const std::vector<HruState>& after,
                      const ClimateForcing& f, const DailyOutput& out) {
  double area = 0.0;
  double sum = 0.0;
  for (std::size_t h = 0; h < b.size(); ++h) {
    const FluxRecord& r = out.fluxes[h];
    const double lost = r.surface_runoff + r.subsurface_flow + r.groundwater_flow + r.actual_et + r.groundwater_sink;
    sum += b.hrus[h].area_acres * (f.precip[h] - (held(after[h], b.hrus[h]) - held(before[h], b.hrus[h])) - lost);
    area += b.hrus[h].area_acres;
  }
  return sum / area;
}

}  // namespace

TEST_CASE("null day") {
  Model m(flat_cover_basin(3));
  auto p = testing::parameters(3);
  std::vector<HruState> s(3);
  auto out = m.daily_step(p, s, day(Date(2006, 7, 1), 70.0, 50.0, {0.0, 0.0, 0.0}));
  CHECK(out.flow_inches == 0.0);
  CHECK(out.swe_mean == 0.0);
  CHECK(out.actual_et == 0.0);
  CHECK(std::abs(out.residual) <= 1e-12);
  for (const auto& x : s) CHECK(x.swe == 0.0);
}

TEST_CASE("warm rain day") {
  const Basin b = flat_cover_basin(4);
  Model m(b);
  auto p = testing::parameters(4);
  auto s = testing::wet_states(4);
  const auto before = s;
  const auto f = day(Date(2006, 6, 15), 78.0, 55.0, {1.0, 1.2, 0.8, 1.5});
  auto out = m.daily_step(p, s, f);
  CHECK(out.max_abs_residual < 1e-6);
  CHECK(std::abs(basin_residual(b, before, s, f, out)) < 1e-6);
  CHECK(out.flow_inches > 0.0);
  CHECK(out.swe_mean == 0.0);
  for (const auto& r : out.fluxes) CHECK(r.net_snow == 0.0);
  CHECK(testing::close_rel(out.flow_cfs, m.to_cfs(out.flow_inches)));
}

TEST_CASE("deep-freeze day") {
  Model m(flat_cover_basin(3));
  auto p = testing::parameters(3);
  auto s = testing::wet_states(3);
  auto out = m.daily_step(p, s, day(Date(2006, 1, 10), 10.0, -15.0, {0.6, 0.6, 0.6}));
  for (std::size_t h = 0; h < 3; ++h) {
    CHECK(out.fluxes[h].net_rain == 0.0);
    CHECK(out.fluxes[h].melt == 0.0);
    CHECK(s[h].swe > 0.0);
    CHECK(s[h].free_water == 0.0);
  }
  CHECK(out.max_abs_residual < 1e-6);
}

TEST_CASE("non-finite forcing is rejected") {
  Model m(flat_cover_basin(2));
  auto p = testing::parameters(2);
  std::vector<HruState> s(2);
  CHECK_THROWS(m.daily_step(p, s, day(Date(2006, 7, 1), NAN, 50.0, {0.0, 0.0})));
}

TEST_CASE("property: HRU order does not change basin results") {
  testing::Gen g(61);
  const std::size_t n = 5;
  Basin fwd = flat_cover_basin(n);
  Basin rev = fwd;
  std::reverse(rev.hrus.begin(), rev.hrus.end());
  rev.index_hru = n - 1;
  Model mf(fwd), mr(rev);
  auto p = testing::parameters(n);
  auto sf = testing::wet_states(n);
  auto sr = sf;
  Date d(2005, 10, 1);
  for (int t = 0; t < 120; ++t, ++d) {
    std::vector<double> pf(n);
    for (auto& x : pf) x = g.sparse(0.0, 1.5, 0.6);
    const std::vector<double> pr(pf.rbegin(), pf.rend());
    const double tmin = g.uniform(0.0, 50.0);
    const double tmax = tmin + g.uniform(5.0, 25.0);
    auto of = mf.daily_step(p, sf, day(d, tmax, tmin, pf));
    auto orr = mr.daily_step(p, sr, day(d, tmax, tmin, pr));
    REQUIRE(testing::close_rel(of.flow_inches, orr.flow_inches, 1e-10));
    CHECK(testing::close_rel(of.swe_mean, orr.swe_mean, 1e-10));
  }
}

TEST_CASE("property: daily water balance closes") {
  testing::Gen g(62);
  const std::size_t n = 4;
  const Basin b = flat_cover_basin(n);
  Model m(b);
  for (int run = 0; run < 6; ++run) {
    auto p = testing::parameters(n);
    std::vector<HruState> s = testing::wet_states(n);
    for (auto& x : s) {
      x.soil_moisture = g.uniform(0.0, 4.0);
      x.soil_recharge = g.uniform(0.0, std::min(1.0, x.soil_moisture));
      x.groundwater = g.sparse(0.0, 5.0);
      x.subsurface = g.sparse(0.0, 2.0);
    }
    Date d(2005, 10, 1);
    for (int t = 0; t < 365; ++t, ++d) {
      std::vector<double> precip(n);
      for (auto& x : precip) x = g.sparse(0.0, 2.0, 0.65);
      const double seasonal = 40.0 - 25.0 * std::cos(2.0 * M_PI * (d.day_of_year() - 15) / 365.0);
      const double tmin = seasonal - 10.0 + g.normal(0.0, 6.0);
      const double tmax = tmin + g.uniform(5.0, 30.0);
      const auto f = day(d, tmax, tmin, precip);
      const auto before = s;
      auto out = m.daily_step(p, s, f);
      REQUIRE(out.max_abs_residual < 1e-6);
      REQUIRE(std::abs(basin_residual(b, before, s, f, out)) < 1e-6);
      for (std::size_t h = 0; h < n; ++h) CHECK(within_bounds(s[h], m.bounds(p, h)));
      CHECK(out.flow_inches >= 0.0);
    }
  }
}

#include <array>
#include <cmath>

#include "doctest.h"
#include "prmsda/snowpack.hpp"
#include "prmsda/state.hpp"
#include "support.hpp"

using namespace prmsda;

namespace {

const std::array<double, 11> kCurve = {0.0, 0.24, 0.4, 0.53, 0.65, 0.75, 0.82, 0.88, 0.93, 0.97, 1.0};

SnowParams params() {
  SnowParams p;
  p.depletion = kCurve;
  return p;
}

HruState random_pack(testing::Gen& g) {
  HruState s;
  const double swe = g.sparse(0.0, 30.0, 0.15);
  if (swe > 0.0) {
    s.free_water = g.uniform(0.0, 0.04) * swe;
    s.ice = swe - s.free_water;
    s.swe = swe;
    s.density = g.uniform(0.15, 0.5);
    s.depth = swe / s.density;
    s.heat_deficit = g.coin(0.4) ? 0.0 : g.uniform(0.0, 1.27 * swe * 10.0);
    if (s.heat_deficit > 0.0) {  // a cold pack holds no liquid
      s.ice = swe;
      s.free_water = 0.0;
    }
    s.pack_temp = 32.0 - 1.8 * s.heat_deficit / (1.27 * swe);
    s.swe_max_track = swe * g.uniform(1.0, 2.0);
    s.fsca = snow_covered_area(swe, s.swe_max_track, 15.0, kCurve);
  }
  s.days_since_snow = g.uniform(0.0, 20.0);
  return s;
}

}  // namespace

TEST_CASE("black-body emission") {
  CHECK(blackbody_emission(-273.16) == 0.0);
  const double k = 273.16;
  CHECK(testing::close_rel(blackbody_emission(0.0), 5.85e-8 * k * k * k * k));
  CHECK(blackbody_emission(0.0) == doctest::Approx(325.6).epsilon(5e-4));  // 325.70 unrounded
}

TEST_CASE("full albedo reflects all shortwave") {
  SnowOptions o;
  auto e = surface_energy(2.0, 300.0, 1.0, 0.5, 0.3, 0.757, 5.0, 0.0, 0.3, o);
  CHECK(e.net_shortwave == 0.0);
}

TEST_CASE("energy application") {
  SUBCASE("zero energy") {
    SnowWater w{5.0, 0.1, 20.0};
    auto r = apply_energy(0.0, 1.0, w, 1e9);
    CHECK(r.melt == 0.0);
    CHECK(w.ice == 5.0);
    CHECK(w.liquid == 0.1);
    CHECK(w.heat == 20.0);
  }
  SUBCASE("one inch of melt") {
    SnowWater w{5.0, 0.0, 0.0};
    auto r = apply_energy(203.2, 1.0, w, 1e9);
    CHECK(testing::close_rel(r.potential_melt, 1.0));
    CHECK(w.ice == doctest::Approx(4.0));
  }
  SUBCASE("deficit absorbs energy first") {
    SnowWater w{5.0, 0.0, 100.0};
    auto r = apply_energy(60.0, 1.0, w, 1e9);
    CHECK(w.heat == doctest::Approx(40.0));
    CHECK(r.melt == 0.0);
  }
}

TEST_CASE("sublimation") {
  SnowWater w{2.0, 0.0, 0.0};
  CHECK(sublimate(w, 0.2, 0.0, 1.0, 0.0) == 0.0);
  CHECK(testing::close_rel(sublimate(w, 0.2, 0.5, 1.0, 0.0), 0.1));
  SnowWater thin{0.05, 0.0, 0.0};
  CHECK(sublimate(thin, 0.2, 0.5, 1.0, 0.0) == doctest::Approx(0.05));
  CHECK(thin.swe() == 0.0);
}

TEST_CASE("settlement and density") {
  CHECK(testing::close_rel(depth_change(0.0, 10.0, 30.0, 0.1, 0.5, 0.1), -1.0));
  CHECK(depth_change(0.0, 10.0, 20.0, 0.1, 0.5, 0.1) == 0.0);

  HruState s;
  s.swe = 10.0;
  s.ice = 10.0;
  s.depth = 25.0;
  s.density = 0.9;
  CHECK(clamp_state(s, HruStateBounds{}).density == doctest::Approx(0.4));
}

TEST_CASE("snow-covered area") {
  CHECK(snow_covered_area(0.0, 10.0, 15.0, kCurve) == 0.0);
  CHECK(snow_covered_area(15.0, 20.0, 15.0, kCurve) == 1.0);
  CHECK(snow_covered_area(5.5, 10.0, 15.0, kCurve) == doctest::Approx(0.5 * (kCurve[5] + kCurve[6])));
  testing::Gen g(41);
  for (int trial = 0; trial < 1000; ++trial) {
    const double track = g.uniform(0.1, 30.0);
    const double a = g.uniform(0.0, track);
    const double b = g.uniform(0.0, track);
    const double fa = snow_covered_area(std::min(a, b), track, 15.0, kCurve);
    const double fb = snow_covered_area(std::max(a, b), track, 15.0, kCurve);
    CHECK(fa <= fb + 1e-12);
  }
}

TEST_CASE("property: daily snowpack step") {
  testing::Gen g(42);
  const SnowParams p = params();
  SnowOptions o;
  for (int trial = 0; trial < 3000; ++trial) {
    HruState s = random_pack(g);
    const HruState before = s;
    SnowDayInput in;
    in.net_snow = g.sparse(0.0, 2.0, 0.6);
    in.net_rain = g.sparse(0.0, 2.0, 0.6);
    in.precip = in.net_snow + in.net_rain;
    in.tmin_c = g.uniform(-25.0, 10.0);
    in.tmax_c = in.tmin_c + g.uniform(0.0, 15.0);
    in.shortwave = g.uniform(0.0, 800.0);
    in.cover = g.uniform(0.0, 0.8);
    in.et_available = g.uniform(0.0, 0.3);
    in.melt_season = g.coin();
    auto out = snowpack_step(s, in, p, o);

    const double expected =
        before.swe + in.net_snow + (in.net_rain - out.rain_bypass) - out.outflow - out.sublimation;
    REQUIRE(std::abs(s.swe - expected) <= 1e-9);
    CHECK(std::abs(s.ice + s.free_water - s.swe) <= 1e-9);
    CHECK(s.heat_deficit >= 0.0);
    CHECK(s.fsca >= 0.0);
    CHECK(s.fsca <= 1.0);
    CHECK(s.depth >= s.swe);
    CHECK(out.outflow >= 0.0);
    CHECK(out.sublimation >= 0.0);
    CHECK(out.rain_bypass >= 0.0);
  }
}

TEST_CASE("property: no melt without energy or precipitation") {
  testing::Gen g(43);
  const SnowParams p = params();
  SnowOptions o;
  for (int trial = 0; trial < 1000; ++trial) {
    HruState s = random_pack(g);
    const double swe0 = s.swe;
    SnowDayInput in;
    in.tmin_c = g.uniform(-40.0, -20.0);
    in.tmax_c = in.tmin_c + g.uniform(0.0, 5.0);
    in.shortwave = 0.0;
    in.et_available = g.uniform(0.0, 0.1);
    auto out = snowpack_step(s, in, p, o);
    CHECK(out.energy.balance <= 0.0);
    CHECK(out.outflow == 0.0);
    CHECK(s.swe <= swe0 + 1e-12);
    CHECK(std::abs(swe0 - out.sublimation - s.swe) <= 1e-9);
  }
}

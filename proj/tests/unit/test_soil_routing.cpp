#include <cmath>
#include <vector>

#include "doctest.h"
#include "prmsda/errors.hpp"
#include "prmsda/soil_routing.hpp"
#include "support.hpp"

using namespace prmsda;

TEST_CASE("impervious store") {
  auto none = impervious_step(0.0, 0.0, 0.0, 0.1);
  CHECK(none.runoff == 0.0);
  CHECK(none.evap == 0.0);
  CHECK(none.storage == 0.0);

  auto full = impervious_step(0.2, 0.1, 0.1, 0.0);
  CHECK(full.runoff == doctest::Approx(0.2));
  CHECK(full.storage == doctest::Approx(0.1));

  auto partial = impervious_step(0.05, 0.02, 0.1, 0.0);
  CHECK(testing::close_rel(partial.storage, 0.07));
  CHECK(partial.runoff == 0.0);
}

TEST_CASE("contributing area") {
  // 0.3 * 4 = 1.2
  CHECK(testing::close_rel(contributing_area(0.01, 0.3, 3.0, 2.0, 1.0), 0.01 * std::pow(10.0, 1.2)));
  CHECK(testing::close_rel(contributing_area(0.01, 0.3, 3.0, 2.0, 1.0), 0.158489319246, 1e-9));
  CHECK(contributing_area(0.5, 0.3, 3.0, 2.0, 0.3) == 0.3);
  // product form: 0.3 * 3 * 0.5 * 2 = 0.9
  CHECK(testing::close_rel(contributing_area(0.01, 0.3, 3.0, 2.0, 1.0, true), 0.01 * std::pow(10.0, 0.9)));
}

TEST_CASE("soil zone") {
  SUBCASE("full column percolates") {
    auto r = soil_zone_step(0.4, 0.0, 1.0, 5.0, 5.0, 1.0, 0.25);
    CHECK(r.to_groundwater == doctest::Approx(0.25));
    CHECK(r.to_subsurface == doctest::Approx(0.15));
    CHECK(r.moisture == 5.0);
  }
  SUBCASE("identity") {
    auto r = soil_zone_step(0.0, 0.0, 0.7, 2.5, 5.0, 1.0, 0.25);
    CHECK(r.moisture == 2.5);
    CHECK(r.recharge == 0.7);
    CHECK(r.et == 0.0);
  }
  SUBCASE("demand exceeds storage") {
    auto r = soil_zone_step(0.0, 10.0, 0.7, 2.5, 5.0, 1.0, 0.25);
    CHECK(r.et == doctest::Approx(2.5));
    CHECK(r.moisture == 0.0);
    CHECK(r.recharge == 0.0);
  }
}

TEST_CASE("subsurface reservoir") {
  auto empty = subsurface_step(0.0, 0.0, 0.1, 0.01, 0.1, 2.0, 5.0);
  CHECK(empty.flow == 0.0);
  CHECK(empty.to_gw == 0.0);

  auto q = subsurface_step(2.0, 0.0, 0.1, 0.01, 0.0, 1.0, 5.0);
  CHECK(testing::close_rel(q.flow, 0.1 * 2.0 + 0.01 * 4.0));
  CHECK(testing::close_rel(q.flow, 0.24));

  auto g = subsurface_step(3.0, 0.0, 0.0, 0.0, 0.1, 2.0, 3.0);
  CHECK(testing::close_rel(g.to_gw, 0.1));
  CHECK(testing::close_rel(g.storage, 2.9));
}

TEST_CASE("groundwater reservoir") {
  auto still = groundwater_step(4.0, 0.0, 0.0, 0.0);
  CHECK(still.storage == 4.0);
  CHECK(testing::close_rel(groundwater_step(4.0, 0.0, 0.05, 0.0).flow, 0.2));
  auto over = groundwater_step(1.0, 0.0, 0.8, 0.4);
  CHECK(testing::close_rel(over.flow + over.sink, 1.0));
  CHECK(testing::close_rel(over.flow / over.sink, 2.0));
  CHECK(over.storage == 0.0);
}

TEST_CASE("basin streamflow") {
  const std::vector<double> zero = {0.0, 0.0};
  const std::vector<double> area = {500.0, 500.0};
  CHECK(basin_streamflow(zero, area) == 0.0);
  const std::vector<double> flows = {1.0, 3.0};
  CHECK(testing::close_rel(basin_streamflow(flows, area), 2.0));
  const std::vector<double> one = {0.37};
  const std::vector<double> one_area = {42.0};
  CHECK(basin_streamflow(one, one_area) == doctest::Approx(0.37));
  const std::vector<double> no_area = {0.0, 0.0};
  CHECK_THROWS_AS(basin_streamflow(flows, no_area), ConfigError);
}

TEST_CASE("property: reservoirs conserve water") {
  testing::Gen g(51);
  for (int trial = 0; trial < 5000; ++trial) {
    const double in = g.sparse(0.0, 3.0);

    auto imp = impervious_step(in, g.uniform(0.0, 0.1), g.uniform(0.0, 0.1), g.uniform(0.0, 0.3));
    CHECK(imp.runoff >= 0.0);
    CHECK(imp.evap >= 0.0);
    CHECK(imp.storage >= 0.0);

    const double smax = g.uniform(0.5, 10.0);
    const double moist = g.uniform(0.0, smax);
    const double rmax = g.uniform(0.1, smax);
    const double rech = g.uniform(0.0, std::min(rmax, moist));
    const double demand = g.uniform(0.0, 0.5);
    auto sz = soil_zone_step(in, demand, rech, moist, smax, rmax, g.uniform(0.0, 0.5));
    REQUIRE(std::abs(moist + in - sz.et - sz.to_groundwater - sz.to_subsurface - sz.moisture) <= 1e-12);
    CHECK(sz.et <= demand + 1e-12);
    CHECK(sz.moisture <= smax + 1e-12);
    CHECK(sz.recharge <= sz.moisture + 1e-12);
    CHECK(sz.recharge <= rmax + 1e-12);
    CHECK(sz.to_subsurface >= 0.0);

    const double s0 = g.sparse(0.0, 20.0);
    auto ss = subsurface_step(s0, in, g.uniform(0.0, 0.5), g.uniform(0.0, 0.5), g.uniform(0.0, 1.0),
                              g.uniform(0.5, 3.0), g.uniform(0.5, 30.0));
    REQUIRE(std::abs(s0 + in - ss.flow - ss.to_gw - ss.storage) <= 1e-12);
    CHECK(ss.flow >= 0.0);
    CHECK(ss.to_gw >= 0.0);
    CHECK(ss.storage >= 0.0);

    auto gw = groundwater_step(s0, in, g.uniform(0.0, 1.0), g.uniform(0.0, 1.0));
    REQUIRE(std::abs(s0 + in - gw.flow - gw.sink - gw.storage) <= 1e-12);
    CHECK(gw.storage >= 0.0);
  }
}

TEST_CASE("property: basin streamflow is a permutation-invariant weighted mean") {
  testing::Gen g(52);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = g.integer(1, 12);
    std::vector<double> f(n), a(n);
    for (int i = 0; i < n; ++i) {
      f[i] = g.sparse(0.0, 5.0);
      a[i] = g.uniform(1.0, 5000.0);
    }
    const double q = basin_streamflow(f, a);
    CHECK(q >= *std::min_element(f.begin(), f.end()) - 1e-12);
    CHECK(q <= *std::max_element(f.begin(), f.end()) + 1e-12);
    std::vector<double> fr(f.rbegin(), f.rend()), ar(a.rbegin(), a.rend());
    CHECK(testing::close_rel(basin_streamflow(fr, ar), q, 1e-12));
  }
}

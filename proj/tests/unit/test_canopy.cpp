#include "doctest.h"
#include "prmsda/canopy.hpp"
#include "support.hpp"

using namespace prmsda;

TEST_CASE("interception cases") {
  SUBCASE("no canopy") {
    auto r = intercept(0.7, 0.6, 0.0, 0.0, 0.1, 0.1);
    CHECK(r.net_precip == 0.7);
    CHECK(r.throughfall == 0.0);
    CHECK(r.storage == 0.0);
  }
  SUBCASE("saturated canopy passes everything") {
    auto r = intercept(0.5, 1.0, 0.1, 0.4, 0.1, 0.1);
    CHECK(r.throughfall == doctest::Approx(0.5));
    CHECK(r.net_precip == doctest::Approx(0.5));
    CHECK(r.storage == doctest::Approx(0.1));
  }
  SUBCASE("partial fill") {
    auto r = intercept(0.5, 1.0, 0.0, 0.4, 0.1, 0.1);
    CHECK(r.storage == doctest::Approx(0.1));
    CHECK(r.throughfall == doctest::Approx(0.4));
    CHECK(testing::close_rel(r.net_precip, 0.4 * 0.4 + 0.6 * 0.5));
    CHECK(r.net_rain == doctest::Approx(r.net_precip));
    CHECK(r.net_snow == 0.0);
  }
}

TEST_CASE("canopy evaporation min rule") {
  CHECK(canopy_evaporate(0.0, 0.2).depleted == 0.0);
  auto a = canopy_evaporate(0.05, 0.2);
  CHECK(a.depleted == doctest::Approx(0.05));
  CHECK(a.storage == 0.0);
  auto b = canopy_evaporate(0.3, 0.1);
  CHECK(b.depleted == doctest::Approx(0.1));
  CHECK(b.storage == doctest::Approx(0.2));
}

TEST_CASE("property: interception conserves water and respects capacity") {
  testing::Gen g(31);
  for (int trial = 0; trial < 3000; ++trial) {
    const double p = g.sparse(0.0, 4.0);
    const double fr = g.coin(0.3) ? (g.coin() ? 0.0 : 1.0) : g.uniform(0.0, 1.0);
    const double cover = g.sparse(0.0, 1.0, 0.1);
    const double crain = g.uniform(0.0, 0.2);
    const double csnow = g.uniform(0.0, 0.2);
    const double s0 = g.uniform(0.0, std::min(crain, csnow));
    auto r = intercept(p, fr, s0, cover, crain, csnow);

    CHECK(std::abs(p - (r.net_precip + cover * (r.storage - s0))) <= 1e-9);
    CHECK(r.net_precip >= 0.0);
    CHECK(r.net_precip <= p + 1e-12);
    CHECK(r.storage >= 0.0);
    CHECK(r.storage <= std::max(crain, csnow) + 1e-12);
    CHECK(std::abs(r.net_rain + r.net_snow - r.net_precip) <= 1e-9);

    // a larger canopy never lets more water through
    auto bigger = intercept(p, fr, s0, cover, crain + 0.05, csnow + 0.05);
    CHECK(bigger.net_precip <= r.net_precip + 1e-12);

    const double demand = g.uniform(0.0, 0.3);
    auto e = canopy_evaporate(r.storage, demand);
    CHECK(std::abs(r.storage - e.storage - e.depleted) <= 1e-12);
    CHECK(e.depleted <= demand + 1e-12);
  }
}

TEST_CASE("cover change keeps water") {
  testing::Gen g(32);
  for (int trial = 0; trial < 1000; ++trial) {
    const double old_cover = g.uniform(0.0, 1.0);
    const double new_cover = g.uniform(0.0, 1.0);
    const double cap = g.uniform(0.01, 0.2);
    const double s = g.uniform(0.0, cap);
    auto t = canopy_cover_change(s, old_cover, new_cover, cap);
    CHECK(std::abs(old_cover * s - (new_cover * t.storage + t.released)) <= 1e-12);
    CHECK(t.storage <= cap + 1e-12);
    CHECK(t.released >= 0.0);
  }
  auto same = canopy_cover_change(0.05, 0.4, 0.4, 0.1);
  CHECK(same.storage == 0.05);
  CHECK(same.released == 0.0);
}

// Shared fixtures and hand-rolled random generators for the test suites.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "prmsda/model.hpp"
#include "prmsda/parameters.hpp"
#include "prmsda/rng.hpp"
#include "prmsda/state.hpp"

namespace testing {

inline std::string data_path(const std::string& name) { return std::string(PRMSDA_DATA_DIR) + "/" + name; }

inline bool close_rel(double a, double b, double rel = 1e-9) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

/// Seeded value generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return lo + (hi - lo) * rng_.uniform(); }
  double normal(double mean = 0.0, double sd = 1.0) { return rng_.normal(mean, sd); }
  int integer(int lo, int hi) { return std::min(hi, lo + static_cast<int>(rng_.uniform() * (hi - lo + 1))); }
  bool coin(double p = 0.5) { return rng_.uniform() < p; }
  /// Zero with probability p_zero, otherwise uniform on [lo, hi].
  double sparse(double lo, double hi, double p_zero = 0.25) { return coin(p_zero) ? 0.0 : uniform(lo, hi); }

  /// Any HruState, legal or not: fields may be negative or oversized.
  prmsda::HruState wild_state() {
    prmsda::HruState s;
    for (std::size_t i = 0; i < prmsda::kStateFieldNames.size(); ++i) {
      prmsda::field(s, i) = coin(0.2) ? uniform(-5.0, 0.0) : uniform(0.0, 40.0);
    }
    s.fsca = uniform(-0.5, 1.5);
    s.density = uniform(-0.2, 1.2);
    s.pack_temp = uniform(-80.0, 50.0);
    return s;
  }

  prmsda::Rng& rng() { return rng_; }

 private:
  prmsda::Rng rng_;
};

inline prmsda::HruGeometry geometry(int id, double elevation, double area = 1000.0) {
  prmsda::HruGeometry g;
  g.id = id;
  g.area_acres = area;
  g.elevation_ft = elevation;
  g.slope = 0.1;
  g.latitude_deg = 40.0;
  g.cover_summer = 0.5;
  g.cover_winter = 0.3;
  g.impervious_fraction = 0.05;
  return g;
}

inline prmsda::Basin basin(std::size_t n) {
  prmsda::Basin b;
  b.name = "test";
  for (std::size_t i = 0; i < n; ++i) {
    b.hrus.push_back(geometry(static_cast<int>(i + 1), 4000.0 + 500.0 * static_cast<double>(i),
                              800.0 + 150.0 * static_cast<double>(i)));
  }
  b.index_hru = 0;
  return b;
}

/// The shipped twin truth parameters broadcast to `n` HRUs.
inline prmsda::ParameterSet parameters(std::size_t n) {
  return prmsda::load_parameters(data_path("twin_parameters.json"), prmsda::ParameterRegistry::standard(), n);
}

/// Mid-season states with some of every storage.
inline std::vector<prmsda::HruState> wet_states(std::size_t n) {
  std::vector<prmsda::HruState> out(n);
  for (auto& s : out) {
    s.soil_moisture = 3.0;
    s.soil_recharge = 1.0;
    s.subsurface = 0.5;
    s.groundwater = 2.0;
    s.impervious = 0.01;
  }
  return out;
}

}  // namespace testing

#include <cmath>
#include <vector>

#include "doctest.h"
#include "prmsda/ensemble.hpp"
#include "support.hpp"

using namespace prmsda;

namespace {

ClimateForcing day(Date d, double tmax, double tmin, std::vector<double> precip) {
  ClimateForcing f;
  f.date = d;
  f.tmax_station = tmax;
  f.tmin_station = tmin;
  f.precip = std::move(precip);
  return f;
}

NoiseConfig silent() {
  NoiseConfig n;
  n.process_fraction = 0.0;
  n.precip_fraction = 0.0;
  n.temperature_sd_c = 0.0;
  n.initial_state_fraction = 0.0;
  n.parameter_init_fraction = 0.0;
  n.seed = 5;
  return n;
}

std::size_t find_global(const StateLayout& l, ParamId id) {
  for (std::size_t k = 0; k < kJointGlobalParameters.size(); ++k) {
    if (kJointGlobalParameters[k] == id) return l.global_parameter_index(k);
  }
  return l.size();
}

}  // namespace

TEST_CASE("layout dimensions") {
  CHECK(StateLayout(FilterMode::Joint, 111).size() == (12 + 9) * 111 + 4 + 2);
  CHECK(StateLayout(FilterMode::StateOnly, 111).size() == 12 * 111);
}

TEST_CASE("parameter spread rules") {
  Model m(testing::basin(2));
  auto p = testing::parameters(2);
  NoiseConfig n;
  Ensemble e(m, testing::wet_states(2), p, n, 4, FilterMode::Joint);
  const auto& l = e.layout();
  std::size_t carea = 0;
  for (std::size_t k = 0; k < kJointHruParameters.size(); ++k) {
    if (kJointHruParameters[k] == ParamId::CareaMax) carea = l.hru_parameter_index(1, k);
  }
  // carea_max spans [0, 1]: sigma_p = 0.25, target = 0.25 * 0.25
  CHECK(p.registry().spec(ParamId::CareaMax).range() * n.parameter_init_fraction == doctest::Approx(0.25));
  CHECK(testing::close_rel(e.parameter_targets()[carea], 0.0625));
  CHECK(e.parameter_targets()[l.state_index(0, StateField::Swe)] == 0.0);
  CHECK(e.parameter_targets()[l.runoff_current_index()] == 0.0);
}

TEST_CASE("zero noise keeps members identical") {
  Model m(testing::basin(3));
  auto p = testing::parameters(3);
  Ensemble e(m, testing::wet_states(3), p, silent(), 5, FilterMode::Joint);
  Date d(2006, 1, 1);
  for (int t = 0; t < 20; ++t, ++d) e.forecast(day(d, 35.0 + t, 20.0, {0.3, 0.2, 0.4}), t, 2);
  const Eigen::MatrixXd x = e.to_matrix(1);
  for (Eigen::Index j = 1; j < x.cols(); ++j) CHECK(x.col(j) == x.col(0));
}

TEST_CASE("forcing perturbation statistics") {
  NoiseConfig n;
  const auto f = day(Date(2006, 3, 1), 50.0, 30.0, {1.0, 0.0});
  const int members = 20000;
  double sum = 0.0;
  for (int m = 0; m < members; ++m) {
    Rng rng = Rng::stream(9, {2, static_cast<std::uint64_t>(m)});
    const auto fm = perturb_forcing(f, n, rng);
    sum += fm.precip[0];
    REQUIRE(fm.precip[0] >= 0.0);
    REQUIRE(fm.precip[1] == 0.0);
    REQUIRE(testing::close_rel(fm.tmax_station - fm.tmin_station, 20.0, 1e-12));
  }
  CHECK(std::abs(sum / members - 1.0) <= 3.0 * 0.4 / std::sqrt(members));
}

TEST_CASE("two-member forecast matches independent daily steps") {
  Model m(testing::basin(1));
  auto p = testing::parameters(1);
  NoiseConfig n = silent();
  n.precip_fraction = 0.4;
  n.temperature_sd_c = 2.0;
  const auto states = testing::wet_states(1);
  Ensemble e(m, states, p, n, 2, FilterMode::StateOnly);
  const auto f = day(Date(2006, 4, 2), 48.0, 29.0, {0.7});
  const std::uint64_t d = 17;
  // start from the members' clamped initial states
  const auto start0 = e.members()[0].states;
  const auto start1 = e.members()[1].states;
  e.forecast(f, d, 1);
  for (std::uint64_t k = 0; k < 2; ++k) {
    Rng rng = Rng::stream(n.seed, {static_cast<std::uint64_t>(StreamPurpose::Forcing), k, d});
    auto s = k == 0 ? start0 : start1;
    const auto out = m.daily_step(p, s, perturb_forcing(f, n, rng));
    CHECK(s == e.members()[k].states);
    CHECK(out.flow_cfs == e.members()[k].runoff_current);
  }
}

TEST_CASE("forecast is independent of thread count") {
  Model m(testing::basin(3));
  auto p = testing::parameters(3);
  NoiseConfig n;
  Ensemble a(m, testing::wet_states(3), p, n, 9, FilterMode::Joint);
  Ensemble b = a;
  const auto f = day(Date(2006, 4, 2), 48.0, 29.0, {0.7, 0.1, 0.0});
  a.forecast(f, 3, 1);
  b.forecast(f, 3, 4);
  CHECK(a.to_matrix(4) == b.to_matrix(4));
}

TEST_CASE("slots with a zero ensemble mean receive no process noise") {
  Model m(testing::basin(2));
  auto p = testing::parameters(2);
  NoiseConfig n = silent();
  n.process_fraction = 0.5;
  Ensemble e(m, testing::wet_states(2), p, n, 6, FilterMode::StateOnly);
  Date d(2006, 7, 1);
  for (int t = 0; t < 5; ++t, ++d) e.forecast(day(d, 85.0, 60.0, {0.0, 0.0}), t, 1);
  for (const auto& mem : e.members()) {
    for (const auto& s : mem.states) {
      CHECK(s.swe == 0.0);
      CHECK(s.heat_deficit == 0.0);
    }
  }
}

TEST_CASE("observation errors") {
  StateLayout l(FilterMode::Joint, 3);
  NoiseConfig n;
  ObservationBatch b;
  b.swe = {{0, 10.0}, {2, 0.0}};
  b.flow_previous = 1000.0;
  auto o = build_observations(b, l, n);
  REQUIRE(o.size() == 3);
  CHECK(o.slots[0] == l.state_index(0, StateField::Swe));
  CHECK(testing::close_rel(o.sigmas[0], 1.0));
  CHECK(o.values[1] == 0.0);
  CHECK(o.sigmas[1] == doctest::Approx(0.01));
  CHECK(o.slots[2] == l.runoff_previous_index());
  CHECK(testing::close_rel(o.sigmas[2], 5.0));
}

TEST_CASE("a monthly global slot shifts every month") {
  Model m(testing::basin(2));
  auto p = testing::parameters(2);
  ParameterSet monthly = load_parameters(testing::data_path("twin_parameters.json"),
                                         ParameterRegistry::standard(Cadence::Monthly), 2);
  Ensemble e(m, testing::wet_states(2), monthly, silent(), 3, FilterMode::Joint);
  const std::vector<double> before = e.members()[1].params.values(ParamId::TmaxAllrain);
  Eigen::MatrixXd x = e.to_matrix(4);
  x(static_cast<Eigen::Index>(find_global(e.layout(), ParamId::TmaxAllrain)), 1) += 1.5;
  e.from_matrix(x, 4);
  const auto& after = e.members()[1].params.values(ParamId::TmaxAllrain);
  REQUIRE(after.size() == before.size());
  for (std::size_t k = 0; k < after.size(); ++k) CHECK(after[k] == doctest::Approx(before[k] + 1.5));
  CHECK(e.members()[0].params.values(ParamId::TmaxAllrain) == before);
}

TEST_CASE("property: every member is within bounds after analysis") {
  testing::Gen g(81);
  for (FilterMode mode : {FilterMode::StateOnly, FilterMode::Joint}) {
    Model m(testing::basin(3));
    auto p = testing::parameters(3);
    NoiseConfig n;
    n.seed = 11;
    Ensemble e(m, testing::wet_states(3), p, n, 30, mode);
    Date d(2006, 1, 1);
    for (int t = 0; t < 40; ++t, ++d) {
      std::vector<double> precip(3);
      for (auto& x : precip) x = g.sparse(0.0, 1.5, 0.5);
      const double tmin = g.uniform(0.0, 35.0);
      e.forecast(day(d, tmin + g.uniform(5.0, 20.0), tmin, precip), t, 2);
      ObservationBatch b;
      for (std::size_t h = 0; h < 3; ++h) b.swe.push_back({h, g.coin(0.2) ? 0.0 : g.uniform(0.0, 15.0)});
      if (mode == FilterMode::Joint) b.flow_previous = g.uniform(0.0, 200.0);
      const auto rep = e.analyze(b, d.month(), t);
      CHECK(std::isfinite(rep.swe_mean_final));
      for (const auto& mem : e.members()) {
        REQUIRE(validate_parameters(mem.params).empty());
        for (std::size_t h = 0; h < 3; ++h) REQUIRE(within_bounds(mem.states[h], m.bounds(mem.params, h)));
        CHECK(mem.runoff_previous >= 0.0);
        CHECK(mem.runoff_current >= 0.0);
      }
      if (mode == FilterMode::Joint) {
        const Eigen::MatrixXd x = e.to_matrix(d.month());
        for (std::size_t i = 0; i < e.layout().size(); ++i) {
          if (!e.layout().is_parameter(i)) continue;
          const double target = e.parameter_targets()[i];
          const auto& spec = p.registry().spec(static_cast<ParamId>(e.layout().slot(i).field));
          // re-inflated rows may be clipped back by the range clamp; otherwise spread is at least the target
          const double lo = x.row(static_cast<Eigen::Index>(i)).minCoeff();
          const double hi = x.row(static_cast<Eigen::Index>(i)).maxCoeff();
          if (lo > spec.min && hi < spec.max) CHECK(row_std(x, static_cast<Eigen::Index>(i)) >= target * (1.0 - 1e-9));
        }
      }
    }
  }
}

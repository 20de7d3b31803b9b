#include <cmath>
#include <vector>

#include "doctest.h"
#include "prmsda/errors.hpp"
#include "prmsda/experiment.hpp"
#include "prmsda/metrics.hpp"
#include "support.hpp"

using namespace prmsda;

namespace {

ExperimentConfig short_twin(int days) {
  ExperimentConfig cfg = load_experiment_config(testing::data_path("twin.json"));
  cfg.start = Date(2006, 1, 1);
  cfg.end = Date(2006, 1, 1) + (days - 1);
  cfg.n_ensemble = 12;
  cfg.threads = 2;
  return cfg;
}

std::vector<SeriesRow> rows_from(const std::vector<double>& flows, Date start) {
  std::vector<SeriesRow> out;
  for (double f : flows) {
    SeriesRow r;
    r.date = start;
    ++start;
    r.flow_cfs = f;
    out.push_back(r);
  }
  return out;
}

}  // namespace

TEST_CASE("error metrics") {
  const std::vector<double> m = {0.0, 0.0};
  const std::vector<double> s = {3.0, -4.0};
  CHECK(rmse(m, s) == doctest::Approx(3.5));
  CHECK(testing::close_rel(rmse_conventional(m, s), std::sqrt(12.5)));
  CHECK(rmse_conventional(m, s) == doctest::Approx(3.5355).epsilon(1e-4));
  const std::vector<double> three = {0.0};
  CHECK_THROWS_AS(rmse(m, three), ConfigError);

  const std::vector<double> q = {1.0, 2.0, 3.0};
  CHECK(ar1_baseline(q, 0.5) == std::vector<double>{0.5, 1.0, 2.0});
  const std::vector<double> one = {1.0};
  CHECK_THROWS_AS(ar1_baseline(one, 0.0), ConfigError);

  CHECK(percent_change(5.0, 10.0) == doctest::Approx(-50.0));
  CHECK(percent_change(0.0, 0.0) == 0.0);
}

TEST_CASE("metrics reject misaligned series") {
  const auto truth = rows_from({1.0, 2.0, 3.0}, Date(2006, 1, 1));
  CHECK_THROWS_AS(compute_metrics(truth, {{"open_loop", rows_from({1.0, 2.0, 3.0}, Date(2006, 1, 2))}}),
                  ConfigError);
  CHECK_THROWS_AS(compute_metrics(truth, {{"open_loop", rows_from({1.0, 2.0}, Date(2006, 1, 1))}}), ConfigError);
}

TEST_CASE("property: reported percent changes agree with the errors") {
  testing::Gen g(101);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = g.integer(2, 30);
    std::vector<double> t(n), a(n), b(n);
    for (int i = 0; i < n; ++i) {
      t[i] = g.uniform(0.0, 100.0);
      a[i] = t[i] + g.normal(0.0, 10.0);
      b[i] = t[i] + g.normal(0.0, 5.0);
    }
    const Date d(2006, 1, 1);
    const auto rep = compute_metrics(rows_from(t, d), {{"open_loop", rows_from(a, d)}, {"joint", rows_from(b, d)}});
    const double ol = rep.streamflow.at("open_loop").rmse;
    CHECK(testing::close_rel(ol, rmse(t, a)));
    CHECK(testing::close_rel(rep.streamflow_change_vs_open_loop.at("joint"),
                             100.0 * (rep.streamflow.at("joint").rmse - ol) / ol));
  }
}

TEST_CASE("twin with no bias and no noise reproduces the truth exactly") {
  ExperimentConfig cfg = short_twin(60);
  cfg.twin.bias_fraction = 0.0;
  cfg.twin.perturb_truth_forcing = false;
  cfg.noise.process_fraction = 0.0;
  cfg.noise.precip_fraction = 0.0;
  cfg.noise.temperature_sd_c = 0.0;
  cfg.noise.initial_state_fraction = 0.0;
  cfg.noise.parameter_init_fraction = 0.0;
  const auto r = run_twin(cfg);
  REQUIRE(r.truth.size() == 60);
  for (const char* mode : {"open_loop", "swe_only", "joint"}) {
    CAPTURE(mode);
    CHECK(r.metrics.streamflow.at(mode).rmse == 0.0);
    CHECK(r.metrics.swe.at(mode).rmse == 0.0);
  }
}

TEST_CASE("twin is deterministic and independent of thread count") {
  ExperimentConfig cfg = short_twin(30);
  const auto a = run_twin(cfg);
  cfg.threads = 1;
  const auto b = run_twin(cfg);
  CHECK(a.metrics.to_json() == b.metrics.to_json());
  REQUIRE(a.joint.size() == b.joint.size());
  for (std::size_t t = 0; t < a.joint.size(); ++t) {
    CHECK(a.joint[t].flow_cfs == b.joint[t].flow_cfs);
    CHECK(a.swe_only[t].swe_mean == b.swe_only[t].swe_mean);
  }
  CHECK(a.metrics.max_truth_residual < 1e-6);
}

TEST_CASE("configuration errors") {
  const std::string base = testing::data_path("");
  CHECK_THROWS_AS(parse_experiment_config(R"({"basin": "b.json", "bogus": 1})", base), ConfigError);
  CHECK_THROWS_AS(parse_experiment_config(R"({"n_ensemble": "ten"})", base), ConfigError);
  CHECK_THROWS_AS(parse_run_mode("kalman"), ConfigError);
  CHECK(parse_run_mode("swe-only") == RunMode::SweOnly);
  ExperimentConfig cfg = short_twin(10);
  cfg.n_ensemble = 1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("biased parameters stay in range") {
  const auto p = testing::parameters(3);
  for (double frac : {-1.0, -0.2, 0.0, 0.2, 1.0}) {
    const auto b = biased_parameters(p, frac);
    CHECK(validate_parameters(b).empty());
    if (frac == 0.0) CHECK(b.values(ParamId::GwflowCoef) == p.values(ParamId::GwflowCoef));
  }
}

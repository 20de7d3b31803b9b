#include <benchmark/benchmark.h>

#include "prmsda/filter.hpp"
#include "prmsda/layout.hpp"

using namespace prmsda;

// Analysis on a joint-sized vector: args are HRU count and member count.
// Every HRU's SWE plus the previous-day flow is observed.
static void BM_Analysis(benchmark::State& state) {
  const auto n_hru = static_cast<std::size_t>(state.range(0));
  const auto n = static_cast<Eigen::Index>(state.range(1));
  const StateLayout layout(FilterMode::Joint, n_hru);
  Rng draw(3);
  Eigen::MatrixXd base(static_cast<Eigen::Index>(layout.size()), n);
  for (Eigen::Index i = 0; i < base.size(); ++i) base.data()[i] = draw.normal(1.0, 0.3);
  ObservationSet obs;
  for (std::size_t h = 0; h < n_hru; ++h) obs.add(layout.state_index(h, StateField::Swe), 1.2, 0.12);
  obs.add(layout.runoff_previous_index(), 1.0, 0.05);
  for (auto _ : state) {
    Eigen::MatrixXd x = base;
    Rng rng(5);
    auto rep = enkf_analysis(x, obs, rng);
    benchmark::DoNotOptimize(rep.gain.data());
  }
}
BENCHMARK(BM_Analysis)->Args({10, 100})->Args({111, 100});

static void BM_Inflate(benchmark::State& state) {
  const auto rows = static_cast<Eigen::Index>(state.range(0));
  Rng draw(4);
  Eigen::MatrixXd xf(rows, 100), xa(rows, 100);
  for (Eigen::Index i = 0; i < xf.size(); ++i) {
    xf.data()[i] = draw.normal();
    xa.data()[i] = draw.normal();
  }
  for (auto _ : state) benchmark::DoNotOptimize(inflate(xa, xf, 0.9).data());
}
BENCHMARK(BM_Inflate)->Arg(216)->Arg(2337);

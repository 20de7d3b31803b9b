#include <benchmark/benchmark.h>

#include "prmsda/experiment.hpp"

using namespace prmsda;

namespace {

const ExperimentInputs& twin_inputs() {
  static const ExperimentInputs in = load_inputs(load_experiment_config(std::string(PRMSDA_DATA_DIR) + "/twin.json"));
  return in;
}

}  // namespace

// One basin day for the 10-HRU twin, cycling through the water year.
static void BM_DailyStep(benchmark::State& state) {
  const auto& in = twin_inputs();
  auto states = initial_states(in.model, in.parameters, {});
  std::size_t t = 0;
  for (auto _ : state) {
    auto out = in.model.daily_step(in.parameters, states, in.forcing[t]);
    benchmark::DoNotOptimize(out.flow_cfs);
    if (++t == in.forcing.size()) t = 0;
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(in.model.basin().size()));
}
BENCHMARK(BM_DailyStep);

// Ensemble forecast of one day; argument is the member count.
static void BM_EnsembleForecast(benchmark::State& state) {
  const auto& in = twin_inputs();
  NoiseConfig noise;
  Ensemble e(in.model, initial_states(in.model, in.parameters, {}), in.parameters, noise,
             static_cast<std::size_t>(state.range(0)), FilterMode::Joint);
  std::uint64_t day = 0;
  for (auto _ : state) {
    auto s = e.forecast(in.forcing[day % in.forcing.size()], day, 1);
    benchmark::DoNotOptimize(s.flow_mean);
    ++day;
  }
}
BENCHMARK(BM_EnsembleForecast)->Arg(20)->Arg(100);

#include "prmsda/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "prmsda/errors.hpp"

namespace prmsda {

namespace {

constexpr double kFahrenheitPerCelsius = 1.8;

std::uint64_t purpose(StreamPurpose p) { return static_cast<std::uint64_t>(p); }

struct Moments {
  double mean = 0.0;
  double std = 0.0;
};

template <typename F>
Moments moments(const std::vector<Member>& members, F value) {
  Moments m;
  const std::size_t n = members.size();
  if (n == 0) return m;
  const double x0 = value(members[0]);
  double sum = 0.0;
  for (const auto& mem : members) sum += value(mem) - x0;
  m.mean = x0 + sum / static_cast<double>(n);
  if (n > 1) {
    double ss = 0.0;
    for (const auto& mem : members) ss += (value(mem) - m.mean) * (value(mem) - m.mean);
    m.std = std::sqrt(ss / static_cast<double>(n - 1));
  }
  return m;
}

}  // namespace

void validate_noise(const NoiseConfig& n) {
  auto nonneg = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError(std::string("noise setting '") + name + "' must be >= 0");
  };
  nonneg(n.process_fraction, "process_fraction");
  nonneg(n.precip_fraction, "precip_fraction");
  nonneg(n.temperature_sd_c, "temperature_sd_c");
  nonneg(n.parameter_init_fraction, "parameter_init_fraction");
  nonneg(n.parameter_target_fraction, "parameter_target_fraction");
  nonneg(n.initial_state_fraction, "initial_state_fraction");
  nonneg(n.swe_obs_fraction, "swe_obs_fraction");
  nonneg(n.flow_obs_fraction, "flow_obs_fraction");
  if (!(n.swe_obs_floor > 0.0) || !(n.flow_obs_floor > 0.0)) throw ConfigError("observation error floors must be > 0");
  if (!(n.inflation >= 0.0 && n.inflation <= 1.0)) throw ConfigError("inflation must lie in [0,1]");
  if (n.process_fraction > 1.0 || n.parameter_init_fraction > 1.0 || n.parameter_target_fraction > 1.0 ||
      n.initial_state_fraction > 1.0) {
    throw ConfigError("noise fractions must lie in [0,1]");
  }
}

ClimateForcing perturb_forcing(const ClimateForcing& f, const NoiseConfig& noise, Rng& rng) {
  ClimateForcing out = f;
  for (double& p : out.precip) {
    const double z = rng.normal();
    p = std::max(0.0, p + noise.precip_fraction * p * z);
  }
  const double shift = noise.temperature_sd_c * kFahrenheitPerCelsius * rng.normal();
  out.tmax_station += shift;
  out.tmin_station += shift;
  return out;
}

ObservationSet build_observations(const ObservationBatch& batch, const StateLayout& layout, const NoiseConfig& noise) {
  ObservationSet obs;
  for (const auto& s : batch.swe) {
    if (s.hru >= layout.hru_count()) throw ConfigError("SWE observation for unknown HRU position");
    if (!std::isfinite(s.swe)) continue;
    const double sigma = std::max(noise.swe_obs_fraction * std::abs(s.swe), noise.swe_obs_floor);
    obs.add(layout.state_index(s.hru, StateField::Swe), s.swe, sigma);
  }
  if (batch.flow_previous && layout.mode() == FilterMode::Joint && std::isfinite(*batch.flow_previous)) {
    const double f = *batch.flow_previous;
    obs.add(layout.runoff_previous_index(), f, std::max(noise.flow_obs_fraction * std::abs(f), noise.flow_obs_floor));
  }
  return obs;
}

Ensemble::Ensemble(const Model& model, const std::vector<HruState>& mean_states, const ParameterSet& params,
                   const NoiseConfig& noise, std::size_t n, FilterMode mode)
    : model_(&model), noise_(noise), layout_(mode, model.basin().size()) {
  validate_noise(noise);
  if (n < 2) throw ConfigError("ensemble needs at least 2 members");
  if (mean_states.size() != model.basin().size()) throw ConfigError("initial state count does not match HRU count");
  layout_.check_parameters(params);

  targets_.assign(layout_.size(), 0.0);
  for (std::size_t i = 0; i < layout_.size(); ++i) {
    if (!layout_.is_parameter(i)) continue;
    const auto& spec = params.registry().spec(static_cast<ParamId>(layout_.slot(i).field));
    targets_[i] = noise.parameter_target_fraction * noise.parameter_init_fraction * spec.range();
  }

  members_.resize(n);
  for (std::size_t m = 0; m < n; ++m) {
    Rng rng = Rng::stream(noise.seed, {purpose(StreamPurpose::Init), m});
    Member& mem = members_[m];
    mem.states = mean_states;
    for (auto& s : mem.states) {
      for (std::size_t f = 0; f < kFilteredStateCount; ++f) {
        double& v = field(s, f);
        v += noise.initial_state_fraction * std::abs(v) * rng.normal();
      }
    }
    mem.params = params;
    if (mode == FilterMode::Joint) {
      auto perturb_family = [&](ParamId id) {
        const auto& spec = params.registry().spec(id);
        const double sd = noise.parameter_init_fraction * spec.range();
        auto& values = mem.params.values(id);
        const std::size_t width = spec.width();
        for (std::size_t base = 0; base < values.size(); base += width) {
          const double offset = sd * rng.normal();
          for (std::size_t k = 0; k < width; ++k) values[base + k] += offset;
        }
      };
      for (ParamId id : kJointHruParameters) perturb_family(id);
      for (ParamId id : kJointGlobalParameters) perturb_family(id);
    }
  }
  clamp_all();
}

void Ensemble::clamp_all() {
  for (auto& m : members_) {
    clamp_parameters(m.params);
    for (std::size_t h = 0; h < m.states.size(); ++h) m.states[h] = clamp_state(m.states[h], model_->bounds(m.params, h));
    if (!(m.runoff_previous >= 0.0)) m.runoff_previous = 0.0;
    if (!(m.runoff_current >= 0.0)) m.runoff_current = 0.0;
  }
}

Eigen::MatrixXd Ensemble::to_matrix(unsigned month) const {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(layout_.size()), static_cast<Eigen::Index>(members_.size()));
  for (std::size_t m = 0; m < members_.size(); ++m) {
    const Member& mem = members_[m];
    layout_.pack(mem.states, mem.params, month, mem.runoff_previous, mem.runoff_current,
                 x.col(static_cast<Eigen::Index>(m)));
  }
  return x;
}

void Ensemble::from_matrix(const Eigen::MatrixXd& x, unsigned month) {
  if (x.rows() != static_cast<Eigen::Index>(layout_.size()) || x.cols() != static_cast<Eigen::Index>(members_.size())) {
    throw ConfigError("member matrix shape does not match the ensemble layout");
  }
  for (std::size_t m = 0; m < members_.size(); ++m) {
    Member& mem = members_[m];
    layout_.unpack(x.col(static_cast<Eigen::Index>(m)), month, mem.states, mem.params, mem.runoff_previous,
                   mem.runoff_current);
  }
}

ForecastSummary Ensemble::forecast(const ClimateForcing& forcing, std::uint64_t day, unsigned threads) {
  const std::size_t n = members_.size();
  std::vector<std::exception_ptr> errors(n);
  auto advance = [&](std::size_t m) {
    try {
      Rng rng = Rng::stream(noise_.seed, {purpose(StreamPurpose::Forcing), m, day});
      const ClimateForcing fm = perturb_forcing(forcing, noise_, rng);
      Member& mem = members_[m];
      mem.last = model_->daily_step(mem.params, mem.states, fm);
      mem.runoff_previous = mem.runoff_current;
      mem.runoff_current = mem.last.flow_cfs;
    } catch (...) {
      errors[m] = std::current_exception();
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t m = 0; m < n; ++m) advance(m);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t m = t; m < n; m += threads) advance(m);
      });
    }
    for (auto& th : pool) th.join();
  }
  for (std::size_t m = 0; m < n; ++m) {
    if (!errors[m]) continue;
    try {
      std::rethrow_exception(errors[m]);
    } catch (const std::exception& e) {
      throw ModelError("ensemble member " + std::to_string(m) + ": " + e.what());
    }
  }

  if (noise_.process_fraction > 0.0) {
    const std::size_t n_hru = model_->basin().size();
    std::vector<double> means(n_hru * kFilteredStateCount);
    for (std::size_t h = 0; h < n_hru; ++h) {
      for (std::size_t f = 0; f < kFilteredStateCount; ++f) {
        means[h * kFilteredStateCount + f] = moments(members_, [&](const Member& mem) { return field(mem.states[h], f); }).mean;
      }
    }
    for (std::size_t m = 0; m < n; ++m) {
      Rng rng = Rng::stream(noise_.seed, {purpose(StreamPurpose::Process), m, day});
      Member& mem = members_[m];
      for (std::size_t h = 0; h < n_hru; ++h) {
        for (std::size_t f = 0; f < kFilteredStateCount; ++f) {
          const double z = rng.normal();
          field(mem.states[h], f) += noise_.process_fraction * std::abs(means[h * kFilteredStateCount + f]) * z;
        }
        mem.states[h] = clamp_state(mem.states[h], model_->bounds(mem.params, h));
      }
    }
  }

  ForecastSummary s;
  const Moments flow = moments(members_, [](const Member& m) { return m.last.flow_cfs; });
  const Moments swe = moments(members_, [&](const Member& m) { return basin_mean_swe(m); });
  s.flow_mean = flow.mean;
  s.flow_std = flow.std;
  s.swe_mean = swe.mean;
  s.swe_std = swe.std;
  s.surface_runoff = moments(members_, [](const Member& m) { return m.last.surface_runoff; }).mean;
  s.subsurface_flow = moments(members_, [](const Member& m) { return m.last.subsurface_flow; }).mean;
  s.groundwater_flow = moments(members_, [](const Member& m) { return m.last.groundwater_flow; }).mean;
  for (const auto& m : members_) s.max_abs_residual = std::max(s.max_abs_residual, m.last.max_abs_residual);
  return s;
}

AnalysisSummary Ensemble::analyze(const ObservationBatch& batch, unsigned month, std::uint64_t day,
                                  const AnalysisOptions& opts) {
  AnalysisSummary out;
  const ObservationSet obs = build_observations(batch, layout_, noise_);
  if (obs.size() > 0) {
    const Eigen::MatrixXd forecast = to_matrix(month);
    Eigen::MatrixXd x = forecast;
    Rng rng = Rng::stream(noise_.seed, {purpose(StreamPurpose::Analysis), day});
    out.regularized = enkf_analysis(x, obs, rng, opts).regularized;
    from_matrix(x, month);
    clamp_all();

    const Moments pre = moments(members_, [&](const Member& m) { return basin_mean_swe(m); });
    out.swe_mean = pre.mean;
    out.swe_std_before_inflation = pre.std;

    from_matrix(inflate(to_matrix(month), forecast, noise_.inflation), month);
    clamp_all();
  } else {
    const Moments pre = moments(members_, [&](const Member& m) { return basin_mean_swe(m); });
    out.swe_mean = pre.mean;
    out.swe_std_before_inflation = pre.std;
  }

  if (layout_.mode() == FilterMode::Joint && noise_.reinflate_parameters) {
    Eigen::MatrixXd x = to_matrix(month);
    Rng rng = Rng::stream(noise_.seed, {purpose(StreamPurpose::Reinflate), day});
    for (std::size_t i = 0; i < layout_.size(); ++i) {
      if (!layout_.is_parameter(i)) continue;
      if (reinflate_row(x, static_cast<Eigen::Index>(i), targets_[i], rng)) ++out.reinflated_slots;
    }
    if (out.reinflated_slots > 0) {
      from_matrix(x, month);
      clamp_all();
    }
  }

  const Moments post = moments(members_, [&](const Member& m) { return basin_mean_swe(m); });
  out.swe_mean_final = post.mean;
  out.swe_std = post.std;
  out.runoff_current_mean = moments(members_, [](const Member& m) { return m.runoff_current; }).mean;
  return out;
}

}  // namespace prmsda

#include "prmsda/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "prmsda/errors.hpp"
#include "prmsda/metrics.hpp"
#include "prmsda/snapshot.hpp"

namespace prmsda {

namespace fs = std::filesystem;
using nlohmann::json;

RunMode parse_run_mode(const std::string& text) {
  if (text == "open-loop") return RunMode::OpenLoop;
  if (text == "swe-only") return RunMode::SweOnly;
  if (text == "joint") return RunMode::Joint;
  throw ConfigError("unknown mode '" + text + "' (expected open-loop, swe-only or joint)");
}

std::string to_string(RunMode m) {
  switch (m) {
    case RunMode::OpenLoop: return "open-loop";
    case RunMode::SweOnly: return "swe-only";
    case RunMode::Joint: return "joint";
  }
  return "?";
}

void ExperimentConfig::validate() const {
  if (n_ensemble < 2) throw ConfigError("n_ensemble must be >= 2");
  validate_noise(noise);
  if (start && end && *end < *start) throw ConfigError("end date precedes start date");
  if (!(twin.bias_fraction >= -1.0 && twin.bias_fraction <= 1.0)) throw ConfigError("bias_fraction must lie in [-1,1]");
  if (!(initial.soil_moisture_fraction >= 0.0 && initial.soil_moisture_fraction <= 1.0) ||
      !(initial.soil_recharge_fraction >= 0.0 && initial.soil_recharge_fraction <= 1.0)) {
    throw ConfigError("initial soil fractions must lie in [0,1]");
  }
  if (!(initial.subsurface >= 0.0) || !(initial.groundwater >= 0.0)) {
    throw ConfigError("initial storages must be >= 0");
  }
}

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw ConfigError("unknown key '" + it.key() + "' in " + where);
  }
}

std::string resolve(const std::string& base, const std::string& p) {
  if (p.empty()) return p;
  const fs::path path(p);
  return path.is_absolute() ? p : (fs::path(base) / path).lexically_normal().string();
}

template <typename T>
void read(const json& j, const char* key, T& target) {
  if (!j.contains(key)) return;
  try {
    target = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

std::pair<unsigned, unsigned> month_day(const std::string& text) {
  unsigned m = 0, d = 0;
  char dash = 0;
  std::istringstream ss(text);
  if (!(ss >> m >> dash >> d) || dash != '-' || m < 1 || m > 12 || d < 1 || d > 31) {
    throw ConfigError("expected MM-DD, got '" + text + "'");
  }
  return {m, d};
}

void read_albedo(const json& j, AlbedoCurve& c) {
  reject_unknown(j, {"max", "min", "decay"}, "albedo curve");
  read(j, "max", c.max);
  read(j, "min", c.min);
  read(j, "decay", c.decay);
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j,
                 {"basin", "forcing", "parameters", "observations", "output", "tmax_allrain_cadence", "start", "end",
                  "mode", "n_ensemble", "seed", "threads", "noise", "model", "initial_state", "twin"},
                 "config");
  ExperimentConfig c;
  std::string s;
  read(j, "basin", c.basin_path);
  read(j, "forcing", c.forcing_path);
  read(j, "parameters", c.parameters_path);
  read(j, "output", c.output_dir);
  c.basin_path = resolve(base_dir, c.basin_path);
  c.forcing_path = resolve(base_dir, c.forcing_path);
  c.parameters_path = resolve(base_dir, c.parameters_path);
  c.output_dir = resolve(base_dir, c.output_dir);
  if (j.contains("observations")) {
    const json& o = j["observations"];
    reject_unknown(o, {"swe", "flow"}, "observations");
    read(o, "swe", c.swe_obs_path);
    read(o, "flow", c.flow_obs_path);
    c.swe_obs_path = resolve(base_dir, c.swe_obs_path);
    c.flow_obs_path = resolve(base_dir, c.flow_obs_path);
  }
  if (j.contains("tmax_allrain_cadence")) {
    read(j, "tmax_allrain_cadence", s);
    if (s == "constant") c.tmax_allrain_cadence = Cadence::Constant;
    else if (s == "monthly") c.tmax_allrain_cadence = Cadence::Monthly;
    else throw ConfigError("tmax_allrain_cadence must be 'constant' or 'monthly'");
  }
  if (j.contains("start")) {
    read(j, "start", s);
    c.start = Date::parse(s);
  }
  if (j.contains("end")) {
    read(j, "end", s);
    c.end = Date::parse(s);
  }
  if (j.contains("mode")) {
    read(j, "mode", s);
    c.mode = parse_run_mode(s);
  }
  read(j, "n_ensemble", c.n_ensemble);
  read(j, "seed", c.noise.seed);
  read(j, "threads", c.threads);

  if (j.contains("noise")) {
    const json& n = j["noise"];
    reject_unknown(n,
                   {"process_fraction", "precip_fraction", "temperature_sd_c", "inflation", "parameter_init_fraction",
                    "parameter_target_fraction", "initial_state_fraction", "swe_obs_fraction", "swe_obs_floor",
                    "flow_obs_fraction", "flow_obs_floor", "reinflate_parameters"},
                   "noise");
    NoiseConfig& nc = c.noise;
    read(n, "process_fraction", nc.process_fraction);
    read(n, "precip_fraction", nc.precip_fraction);
    read(n, "temperature_sd_c", nc.temperature_sd_c);
    read(n, "inflation", nc.inflation);
    read(n, "parameter_init_fraction", nc.parameter_init_fraction);
    read(n, "parameter_target_fraction", nc.parameter_target_fraction);
    read(n, "initial_state_fraction", nc.initial_state_fraction);
    read(n, "swe_obs_fraction", nc.swe_obs_fraction);
    read(n, "swe_obs_floor", nc.swe_obs_floor);
    read(n, "flow_obs_fraction", nc.flow_obs_fraction);
    read(n, "flow_obs_floor", nc.flow_obs_floor);
    read(n, "reinflate_parameters", nc.reinflate_parameters);
  }
  if (j.contains("model")) {
    const json& m = j["model"];
    reject_unknown(m,
                   {"product_runoff_exponent", "degree_day_curve", "summer_start", "summer_end", "free_water_fraction",
                    "ice_specific_heat", "max_pack_cold_c", "melt_season_start", "melt_season_end",
                    "albedo_accumulation", "albedo_melt", "storage_cap", "recharge_fraction"},
                   "model");
    ModelOptions& mo = c.model;
    read(m, "product_runoff_exponent", mo.product_runoff_exponent);
    if (m.contains("degree_day_curve")) {
      read(m, "degree_day_curve", s);
      mo.degree_day_curve = DegreeDayCurve::load(resolve(base_dir, s));
    }
    if (m.contains("summer_start")) {
      read(m, "summer_start", s);
      std::tie(mo.season.summer_start_month, mo.season.summer_start_day) = month_day(s);
    }
    if (m.contains("summer_end")) {
      read(m, "summer_end", s);
      std::tie(mo.season.summer_end_month, mo.season.summer_end_day) = month_day(s);
    }
    if (m.contains("melt_season_start")) {
      read(m, "melt_season_start", s);
      std::tie(mo.snow.melt_season_start_month, mo.snow.melt_season_start_day) = month_day(s);
    }
    if (m.contains("melt_season_end")) {
      read(m, "melt_season_end", s);
      std::tie(mo.snow.melt_season_end_month, mo.snow.melt_season_end_day) = month_day(s);
    }
    read(m, "free_water_fraction", mo.snow.free_water_fraction);
    read(m, "ice_specific_heat", mo.snow.ice_specific_heat);
    read(m, "max_pack_cold_c", mo.snow.max_pack_cold_c);
    mo.bounds.max_pack_cold_c = mo.snow.max_pack_cold_c;
    if (m.contains("albedo_accumulation")) read_albedo(m["albedo_accumulation"], mo.snow.accumulation);
    if (m.contains("albedo_melt")) read_albedo(m["albedo_melt"], mo.snow.melt);
    read(m, "storage_cap", mo.bounds.storage_cap);
    read(m, "recharge_fraction", mo.bounds.recharge_fraction);
  }
  if (j.contains("initial_state")) {
    const json& i = j["initial_state"];
    reject_unknown(i, {"soil_moisture_fraction", "soil_recharge_fraction", "subsurface", "groundwater"},
                   "initial_state");
    read(i, "soil_moisture_fraction", c.initial.soil_moisture_fraction);
    read(i, "soil_recharge_fraction", c.initial.soil_recharge_fraction);
    read(i, "subsurface", c.initial.subsurface);
    read(i, "groundwater", c.initial.groundwater);
  }
  if (j.contains("twin")) {
    const json& t = j["twin"];
    reject_unknown(t, {"bias_fraction", "perturb_truth_forcing"}, "twin");
    read(t, "bias_fraction", c.twin.bias_fraction);
    read(t, "perturb_truth_forcing", c.twin.perturb_truth_forcing);
  }
  c.validate();
  return c;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_experiment_config(ss.str(), fs::path(path).parent_path().string());
}

ExperimentInputs load_inputs(const ExperimentConfig& cfg) {
  if (cfg.basin_path.empty() || cfg.forcing_path.empty() || cfg.parameters_path.empty()) {
    throw ConfigError("config must name basin, forcing and parameters files");
  }
  Basin basin = load_basin(cfg.basin_path);
  ParameterSet params =
      load_parameters(cfg.parameters_path, ParameterRegistry::standard(cfg.tmax_allrain_cadence), basin.size());
  if (const auto v = validate_parameters(params); !v.empty()) {
    std::string msg = "parameter file " + cfg.parameters_path + " is invalid:";
    for (const auto& e : v) msg += "\n  " + e.describe();
    throw ConfigError(msg);
  }
  std::vector<ClimateForcing> forcing = load_forcing_csv(cfg.forcing_path, basin);
  const Date first = forcing.front().date;
  const Date last = forcing.back().date;
  const Date start = cfg.start.value_or(first);
  const Date end = cfg.end.value_or(last);
  if (start < first || end > last) {
    throw ConfigError("requested period " + start.iso() + ".." + end.iso() + " is outside the forcing record " +
                      first.iso() + ".." + last.iso());
  }
  forcing = std::vector<ClimateForcing>(forcing.begin() + (start - first), forcing.begin() + (end - first) + 1);
  return ExperimentInputs{Model(std::move(basin), cfg.model), std::move(params), std::move(forcing)};
}

std::vector<HruState> initial_states(const Model& model, const ParameterSet& params, const InitialConditions& ic) {
  std::vector<HruState> states(model.basin().size());
  for (std::size_t h = 0; h < states.size(); ++h) {
    HruState& s = states[h];
    const double smax = params.value(ParamId::SoilmoistMax, h);
    s.soil_moisture = ic.soil_moisture_fraction * smax;
    s.soil_recharge = std::min(s.soil_moisture, ic.soil_recharge_fraction * model.options().bounds.recharge_fraction * smax);
    s.subsurface = ic.subsurface;
    s.groundwater = ic.groundwater;
    s = clamp_state(s, model.bounds(params, h));
  }
  return states;
}

ParameterSet biased_parameters(const ParameterSet& p, double fraction) {
  ParameterSet out = p;
  auto shift = [&](ParamId id) {
    const auto& spec = p.registry().spec(id);
    for (double& v : out.values(id)) v = std::clamp(v + fraction * spec.range(), spec.min, spec.max);
  };
  for (ParamId id : kJointHruParameters) shift(id);
  for (ParamId id : kJointGlobalParameters) shift(id);
  return out;
}

DeterministicRun run_deterministic(const Model& model, const ParameterSet& params,
                                   const std::vector<ClimateForcing>& forcing, std::vector<HruState> states,
                                   const std::function<ClimateForcing(const ClimateForcing&, std::size_t)>&
                                       forcing_transform) {
  DeterministicRun run;
  run.series.reserve(forcing.size());
  run.swe.reserve(forcing.size());
  for (std::size_t t = 0; t < forcing.size(); ++t) {
    DailyOutput out;
    try {
      out = forcing_transform ? model.daily_step(params, states, forcing_transform(forcing[t], t))
                              : model.daily_step(params, states, forcing[t]);
    } catch (const ModelError& e) {
      throw ModelError(std::string("day ") + forcing[t].date.iso() + ": " + e.what());
    }
    SeriesRow r;
    r.date = forcing[t].date;
    r.flow_cfs = out.flow_cfs;
    r.swe_mean = out.swe_mean;
    r.residual = out.max_abs_residual;
    r.surface_runoff = out.surface_runoff;
    r.subsurface_flow = out.subsurface_flow;
    r.groundwater_flow = out.groundwater_flow;
    run.series.push_back(r);
    std::vector<double> swe(states.size());
    for (std::size_t h = 0; h < states.size(); ++h) swe[h] = states[h].swe;
    run.swe.push_back(std::move(swe));
  }
  return run;
}

std::vector<SeriesRow> run_filter(const Model& model, const ParameterSet& params,
                                  const std::vector<ClimateForcing>& forcing, const std::vector<HruState>& states,
                                  const NoiseConfig& noise, std::size_t n_ensemble, FilterMode mode,
                                  const ObservationSource& observe, unsigned threads) {
  Ensemble ens(model, states, params, noise, n_ensemble, mode);
  std::vector<SeriesRow> rows;
  rows.reserve(forcing.size());
  for (std::size_t t = 0; t < forcing.size(); ++t) {
    const ClimateForcing& f = forcing[t];
    ForecastSummary fc;
    AnalysisSummary an;
    try {
      fc = ens.forecast(f, t, threads);
      an = ens.analyze(observe ? observe(t) : ObservationBatch{}, f.date.month(), t);
    } catch (const std::exception& e) {
      throw ModelError(std::string(mode == FilterMode::Joint ? "joint" : "swe-only") + " run, day " + f.date.iso() +
                       ": " + e.what());
    }
    SeriesRow r;
    r.date = f.date;
    r.flow_cfs = mode == FilterMode::Joint ? an.runoff_current_mean : fc.flow_mean;
    r.flow_std = fc.flow_std;
    r.swe_mean = an.swe_mean_final;
    r.swe_std = an.swe_std;
    r.swe_std_pre_inflation = an.swe_std_before_inflation;
    r.residual = fc.max_abs_residual;
    r.surface_runoff = fc.surface_runoff;
    r.subsurface_flow = fc.subsurface_flow;
    r.groundwater_flow = fc.groundwater_flow;
    rows.push_back(r);
  }
  return rows;
}

namespace {

std::vector<double> column(const std::vector<SeriesRow>& rows, double SeriesRow::*member) {
  std::vector<double> v;
  v.reserve(rows.size());
  for (const auto& r : rows) v.push_back(r.*member);
  return v;
}

ErrorPair errors(const std::vector<double>& measured, const std::vector<double>& simulated) {
  return {rmse(measured, simulated), rmse_conventional(measured, simulated)};
}

}  // namespace

MetricsReport compute_metrics(const std::vector<SeriesRow>& truth,
                              const std::map<std::string, std::vector<SeriesRow>>& modes) {
  MetricsReport m;
  const auto flow = column(truth, &SeriesRow::flow_cfs);
  const auto swe = column(truth, &SeriesRow::swe_mean);
  for (const auto& r : truth) m.max_truth_residual = std::max(m.max_truth_residual, r.residual);
  for (const auto& [name, rows] : modes) {
    if (rows.size() != truth.size()) {
      throw ConfigError("series '" + name + "' has " + std::to_string(rows.size()) + " rows, truth has " +
                        std::to_string(truth.size()));
    }
    for (std::size_t t = 0; t < rows.size(); ++t) {
      if (rows[t].date != truth[t].date) throw ConfigError("series '" + name + "' dates differ from truth");
    }
    m.streamflow[name] = errors(flow, column(rows, &SeriesRow::flow_cfs));
    if (name != "ar1") m.swe[name] = errors(swe, column(rows, &SeriesRow::swe_mean));
  }
  for (const auto& [name, e] : m.streamflow) {
    if (name != "open_loop" && m.streamflow.count("open_loop")) {
      m.streamflow_change_vs_open_loop[name] = percent_change(e.rmse, m.streamflow.at("open_loop").rmse);
    }
    if (name != "ar1" && m.streamflow.count("ar1")) {
      m.streamflow_change_vs_ar1[name] = percent_change(e.rmse, m.streamflow.at("ar1").rmse);
    }
  }
  for (const auto& [name, e] : m.swe) {
    if (name != "open_loop" && m.swe.count("open_loop")) {
      m.swe_change_vs_open_loop[name] = percent_change(e.rmse, m.swe.at("open_loop").rmse);
    }
  }
  return m;
}

std::string MetricsReport::to_json() const {
  nlohmann::ordered_json j;
  auto pairs = [](const std::map<std::string, ErrorPair>& src) {
    nlohmann::ordered_json o = nlohmann::ordered_json::object();
    for (const auto& [k, v] : src) o[k] = {{"rmse", v.rmse}, {"rmse_conventional", v.rmse_conventional}};
    return o;
  };
  auto numbers = [](const std::map<std::string, double>& src) {
    nlohmann::ordered_json o = nlohmann::ordered_json::object();
    for (const auto& [k, v] : src) o[k] = std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
    return o;
  };
  j["rmse_definition"] = "rmse: mean of per-day absolute errors; rmse_conventional: root mean square error";
  j["streamflow_cfs"] = pairs(streamflow);
  j["basin_mean_swe_inches"] = pairs(swe);
  j["streamflow_change_percent_vs_open_loop"] = numbers(streamflow_change_vs_open_loop);
  j["streamflow_change_percent_vs_ar1"] = numbers(streamflow_change_vs_ar1);
  j["swe_change_percent_vs_open_loop"] = numbers(swe_change_vs_open_loop);
  if (streamflow_change_vs_open_loop.count("swe_only")) {
    const double d = streamflow_change_vs_open_loop.at("swe_only");
    j["swe_only_streamflow_change_sign"] = d > 0.0 ? "degraded" : (d < 0.0 ? "improved" : "unchanged");
  }
  j["max_truth_water_balance_residual"] = max_truth_residual;
  return j.dump(2) + "\n";
}

TwinResult run_twin(const ExperimentConfig& cfg, const ExperimentInputs& in, TwinModes modes) {
  TwinResult r;
  const Model& model = in.model;
  const std::vector<HruState> init = initial_states(model, in.parameters, cfg.initial);
  const std::uint64_t seed = cfg.seed();
  const NoiseConfig noise = cfg.noise;

  std::function<ClimateForcing(const ClimateForcing&, std::size_t)> truth_forcing;
  if (cfg.twin.perturb_truth_forcing) {
    truth_forcing = [&](const ClimateForcing& f, std::size_t t) {
      Rng rng = Rng::stream(seed, {static_cast<std::uint64_t>(StreamPurpose::Truth), t});
      return perturb_forcing(f, noise, rng);
    };
  }
  DeterministicRun truth = run_deterministic(model, in.parameters, in.forcing, init, truth_forcing);
  r.truth = truth.series;
  r.truth_swe = truth.swe;

  const ParameterSet prior = biased_parameters(in.parameters, cfg.twin.bias_fraction);
  r.open_loop = run_deterministic(model, prior, in.forcing, init).series;

  std::vector<double> truth_flow = column(r.truth, &SeriesRow::flow_cfs);
  ObservationSource observe = [&](std::size_t t) {
    ObservationBatch b;
    for (std::size_t h = 0; h < model.basin().size(); ++h) b.swe.push_back({h, r.truth_swe[t][h]});
    if (t > 0) b.flow_previous = truth_flow[t - 1];
    return b;
  };
  if (modes.swe_only) {
    r.swe_only = run_filter(model, prior, in.forcing, init, noise, cfg.n_ensemble, FilterMode::StateOnly, observe,
                            cfg.threads);
  }
  if (modes.joint) {
    r.joint = run_filter(model, prior, in.forcing, init, noise, cfg.n_ensemble, FilterMode::Joint, observe,
                         cfg.threads);
  }
  if (r.truth.size() >= 2) {
    const auto ar = ar1_baseline(truth_flow, r.open_loop.front().flow_cfs);
    for (std::size_t t = 0; t < ar.size(); ++t) {
      SeriesRow row;
      row.date = r.truth[t].date;
      row.flow_cfs = ar[t];
      r.ar1.push_back(row);
    }
  }

  std::map<std::string, std::vector<SeriesRow>> series{{"open_loop", r.open_loop}};
  if (!r.swe_only.empty()) series["swe_only"] = r.swe_only;
  if (!r.joint.empty()) series["joint"] = r.joint;
  if (!r.ar1.empty()) series["ar1"] = r.ar1;
  r.metrics = compute_metrics(r.truth, series);
  return r;
}

TwinResult run_twin(const ExperimentConfig& cfg) { return run_twin(cfg, load_inputs(cfg)); }

void write_twin_outputs(const TwinResult& r, const Basin& basin, const std::string& dir) {
  fs::create_directories(dir);
  const fs::path d(dir);
  save_series_csv((d / "truth.csv").string(), r.truth);
  save_series_csv((d / "open_loop.csv").string(), r.open_loop);
  if (!r.swe_only.empty()) save_series_csv((d / "swe_only.csv").string(), r.swe_only);
  if (!r.joint.empty()) save_series_csv((d / "joint.csv").string(), r.joint);
  if (!r.ar1.empty()) save_series_csv((d / "ar1.csv").string(), r.ar1);

  std::ofstream swe((d / "observations_swe.csv").string());
  swe << "date,hru_id,swe\n";
  for (std::size_t t = 0; t < r.truth.size(); ++t) {
    for (std::size_t h = 0; h < basin.size(); ++h) {
      swe << r.truth[t].date.iso() << ',' << basin.hrus[h].id << ',' << format_double(r.truth_swe[t][h]) << '\n';
    }
  }
  std::ofstream flow((d / "observations_flow.csv").string());
  flow << "date,flow\n";
  for (const auto& row : r.truth) flow << row.date.iso() << ',' << format_double(row.flow_cfs) << '\n';

  std::ofstream metrics((d / "metrics.json").string());
  metrics << r.metrics.to_json();
  if (!swe || !flow || !metrics) throw ConfigError("failed writing outputs to " + dir);
}

}  // namespace prmsda

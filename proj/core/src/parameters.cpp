#include "prmsda/parameters.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "prmsda/errors.hpp"

namespace prmsda {

namespace {

using S = Scope;
using C = Cadence;
using P = ParamId;

}  // namespace

ParameterRegistry::ParameterRegistry(Cadence tmax_allrain)
    : specs_{{
          {P::PptRadAdj, "ppt_rad_adj", S::Global, C::Monthly, 0.0, 0.5, "inches"},
          {P::DdaySlope, "dday_slope", S::Global, C::Monthly, 0.2, 0.9, "degday/degF"},
          {P::DdayIntcp, "dday_intcp", S::Global, C::Monthly, -60.0, 10.0, "degday"},
          {P::RadjSppt, "radj_sppt", S::Global, C::Constant, 0.0, 1.0, "-"},
          {P::RadjWppt, "radj_wppt", S::Global, C::Constant, 0.0, 1.0, "-"},
          {P::TminLapse, "tmin_lapse", S::Global, C::Monthly, -10.0, 10.0, "degF/1000ft"},
          {P::TmaxLapse, "tmax_lapse", S::Global, C::Monthly, -10.0, 10.0, "degF/1000ft"},
          {P::TminAdj, "tmin_adj", S::PerHru, C::Constant, -10.0, 10.0, "degF"},
          {P::TmaxAdj, "tmax_adj", S::PerHru, C::Constant, -10.0, 10.0, "degF"},
          {P::TmaxAllsnow, "tmax_allsnow", S::Global, C::Monthly, -10.0, 40.0, "degF"},
          {P::TmaxAllrain, "tmax_allrain", S::Global, tmax_allrain, -8.0, 60.0, "degF"},
          {P::AdjmixRain, "adjmix_rain", S::Global, C::Monthly, 0.6, 1.4, "-"},
          {P::SrainIntcp, "srain_intcp", S::PerHru, C::Constant, 0.0, 1.0, "inches"},
          {P::WrainIntcp, "wrain_intcp", S::PerHru, C::Constant, 0.0, 1.0, "inches"},
          {P::SnowIntcp, "snow_intcp", S::PerHru, C::Constant, 0.0, 1.0, "inches"},
          {P::JhCoef, "jh_coef", S::Global, C::Monthly, 0.005, 0.06, "1/degF"},
          {P::RadTrncf, "rad_trncf", S::PerHru, C::Constant, 0.0, 1.0, "-"},
          {P::EmisNoppt, "emis_noppt", S::Global, C::Constant, 0.757, 1.0, "-"},
          {P::CecnCoef, "cecn_coef", S::Global, C::Monthly, 2.0, 10.0, "cal/degC"},
          {P::PotetSublim, "potet_sublim", S::Global, C::Constant, 0.0, 1.0, "-"},
          {P::DenInit, "den_init", S::Global, C::Constant, 0.01, 0.5, "g/cm3"},
          {P::DenMax, "den_max", S::Global, C::Constant, 0.1, 0.8, "g/cm3"},
          {P::SettleConst, "settle_const", S::Global, C::Constant, 0.01, 0.5, "-"},
          {P::ImpervStorMax, "imperv_stor_max", S::PerHru, C::Constant, 0.0, 0.1, "inches"},
          {P::SoilmoistMax, "soilmoist_max", S::PerHru, C::Constant, 0.001, 60.0, "inches"},
          {P::SmidxCoef, "smidx_coef", S::PerHru, C::Constant, 0.001, 0.06, "-"},
          {P::SmidxExp, "smidx_exp", S::PerHru, C::Constant, 0.1, 0.5, "1/inch"},
          {P::SsrcoefSq, "ssrcoef_sq", S::PerHru, C::Constant, 0.0, 1.0, "1/(inch day)"},
          {P::SsrcoefLin, "ssrcoef_lin", S::PerHru, C::Constant, 0.0, 1.0, "1/day"},
          {P::Ssr2gwRate, "ssr2gw_rate", S::PerHru, C::Constant, 0.05, 0.8, "1/day"},
          {P::Ssr2gwExp, "ssr2gw_exp", S::PerHru, C::Constant, 0.0, 3.0, "-"},
          {P::SsrmaxCoef, "ssrmax_coef", S::PerHru, C::Constant, 1.0, 20.0, "inches"},
          {P::GwflowCoef, "gwflow_coef", S::PerHru, C::Constant, 0.001, 0.5, "1/day"},
          {P::GwsinkCoef, "gwsink_coef", S::PerHru, C::Constant, 0.0, 1.0, "1/day"},
          {P::Soil2gwMax, "soil2gw_max", S::PerHru, C::Constant, 0.0, 5.0, "inches"},
          {P::SnareaCurve, "snarea_curve", S::Global, C::Constant, 0.0, 1.0, "-", 11},
          {P::SnareaThresh, "snarea_thresh", S::PerHru, C::Constant, 0.0, 200.0, "inches"},
          {P::CareaMax, "carea_max", S::PerHru, C::Constant, 0.0, 1.0, "-"},
      }} {}

std::shared_ptr<const ParameterRegistry> ParameterRegistry::standard(Cadence tmax_allrain) {
  // One shared instance per cadence choice.
  static const auto constant = std::shared_ptr<const ParameterRegistry>(new ParameterRegistry(Cadence::Constant));
  static const auto monthly = std::shared_ptr<const ParameterRegistry>(new ParameterRegistry(Cadence::Monthly));
  return tmax_allrain == Cadence::Monthly ? monthly : constant;
}

std::optional<ParamId> ParameterRegistry::find(std::string_view name) const {
  for (const auto& s : specs_) {
    if (s.name == name) return s.id;
  }
  return std::nullopt;
}

std::string ParameterViolation::describe() const {
  std::ostringstream os;
  if (missing) {
    os << name << ": missing or incomplete";
  } else {
    os << name << "[" << index << "] = " << value << " outside [" << min << ", " << max << "]";
  }
  return os.str();
}

ParameterSet::ParameterSet(std::shared_ptr<const ParameterRegistry> registry, std::size_t n_hru)
    : registry_(std::move(registry)), n_hru_(n_hru) {}

void ParameterSet::set(ParamId id, std::vector<double> v) {
  const auto& s = registry_->spec(id);
  const std::size_t n = s.count(n_hru_);
  if (v.size() == 1 && n > 1) {
    v.assign(n, v.front());
  } else if (v.size() == s.width() && s.scope == Scope::PerHru && n_hru_ > 1) {
    // one monthly/curve profile shared by every HRU
    std::vector<double> full;
    full.reserve(n);
    for (std::size_t h = 0; h < n_hru_; ++h) full.insert(full.end(), v.begin(), v.end());
    v = std::move(full);
  }
  if (v.size() != n) {
    throw ConfigError("parameter " + std::string(s.name) + ": expected " + std::to_string(n) + " values, got " +
                      std::to_string(v.size()));
  }
  values_[static_cast<std::size_t>(id)] = std::move(v);
}

std::vector<ParameterViolation> validate_parameters(const ParameterSet& p) {
  std::vector<ParameterViolation> out;
  for (const auto& s : p.registry().specs()) {
    const auto& v = p.values(s.id);
    if (v.size() != s.count(p.hru_count())) {
      out.push_back({std::string(s.name), 0, 0.0, s.min, s.max, true});
      continue;
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!(v[i] >= s.min && v[i] <= s.max)) {
        out.push_back({std::string(s.name), i, v[i], s.min, s.max, false});
      }
    }
  }
  return out;
}

void clamp_parameters(ParameterSet& p) {
  for (const auto& s : p.registry().specs()) {
    for (auto& x : p.values(s.id)) x = std::clamp(x, s.min, s.max);
  }
}

ParameterSet parse_parameters(std::string_view json_text, std::shared_ptr<const ParameterRegistry> registry,
                              std::size_t n_hru) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("parameter file: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("parameter file: top level must be an object");

  ParameterSet p(registry, n_hru);
  for (const auto& [key, val] : doc.items()) {
    auto id = registry->find(key);
    if (!id) throw ParseError("parameter file: unknown parameter '" + key + "'");
    std::vector<double> v;
    if (val.is_number()) {
      v.push_back(val.get<double>());
    } else if (val.is_array()) {
      for (const auto& x : val) {
        if (!x.is_number()) throw ParseError("parameter file: '" + key + "' must contain numbers");
        v.push_back(x.get<double>());
      }
    } else {
      throw ParseError("parameter file: '" + key + "' must be a number or an array");
    }
    p.set(*id, std::move(v));
  }
  return p;
}

ParameterSet load_parameters(const std::string& path, std::shared_ptr<const ParameterRegistry> registry,
                             std::size_t n_hru) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open parameter file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_parameters(ss.str(), std::move(registry), n_hru);
}

std::string dump_parameters(const ParameterSet& p) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (const auto& s : p.registry().specs()) {
    const auto& v = p.values(s.id);
    if (v.empty()) continue;
    doc[std::string(s.name)] = v;
  }
  return doc.dump(2);
}

}  // namespace prmsda

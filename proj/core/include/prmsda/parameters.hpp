/**
 * @file parameters.hpp
 * @brief Calibratable parameter registry with legal ranges, and parameter sets.
 *
 * Every parameter has a scope (one basin-wide instance or one per HRU), a
 * cadence (constant or twelve monthly values) and an inclusive legal range.
 * Values are stored flat per family: index = hru * width + slot, where the
 * width is 1, 12 (monthly) or 11 (the depletion curve).
 */
#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace prmsda {

enum class Scope { Global, PerHru };
enum class Cadence { Constant, Monthly };

/// Registry keys, one per parameter family.
enum class ParamId : std::size_t {
  PptRadAdj,       // Pmin
  DdaySlope,       // phi
  DdayIntcp,       // beta
  RadjSppt,        // gamma_s
  RadjWppt,        // gamma_w
  TminLapse,       // lambda2
  TmaxLapse,       // lambda1
  TminAdj,         // beta2
  TmaxAdj,         // beta1
  TmaxAllsnow,     // Tms
  TmaxAllrain,     // Tmr
  AdjmixRain,      // zeta
  SrainIntcp,      // Crs
  WrainIntcp,      // Crw
  SnowIntcp,       // Cs
  JhCoef,          // jc
  RadTrncf,        // psi
  EmisNoppt,       // epsilon
  CecnCoef,        // omega
  PotetSublim,     // xi
  DenInit,         // rho_init
  DenMax,          // rho_max
  SettleConst,     // tau
  ImpervStorMax,   // Simax
  SoilmoistMax,    // Sszmax
  SmidxCoef,       // alpha1
  SmidxExp,        // theta1
  SsrcoefSq,       // quadratic Sss routing coefficient
  SsrcoefLin,      // linear Sss routing coefficient
  Ssr2gwRate,      // alpha2
  Ssr2gwExp,       // theta2
  SsrmaxCoef,      // smax
  GwflowCoef,      // alpha4
  GwsinkCoef,      // alpha5
  Soil2gwMax,      // Fzgwmax
  SnareaCurve,     // Acurve
  SnareaThresh,    // SWEmax
  CareaMax,        // Asr
};

inline constexpr std::size_t kParamCount = 38;

struct ParameterSpec {
  ParamId id;
  std::string_view name;
  Scope scope;
  Cadence cadence;
  double min;
  double max;
  std::string_view units;
  std::size_t curve_width = 0;  ///< nonzero for fixed-length vector parameters

  /// Values per instance (1, 12 or curve_width).
  std::size_t width() const { return curve_width != 0 ? curve_width : (cadence == Cadence::Monthly ? 12 : 1); }
  std::size_t count(std::size_t n_hru) const { return width() * (scope == Scope::PerHru ? n_hru : 1); }
  double range() const { return max - min; }
};

/// Immutable parameter metadata. The rain-temperature threshold cadence is
/// a registry option because published tables disagree on it.
class ParameterRegistry {
 public:
  static std::shared_ptr<const ParameterRegistry> standard(Cadence tmax_allrain = Cadence::Constant);

  const ParameterSpec& spec(ParamId id) const { return specs_[static_cast<std::size_t>(id)]; }
  const std::array<ParameterSpec, kParamCount>& specs() const { return specs_; }
  std::optional<ParamId> find(std::string_view name) const;

 private:
  explicit ParameterRegistry(Cadence tmax_allrain);
  std::array<ParameterSpec, kParamCount> specs_;
};

struct ParameterViolation {
  std::string name;
  std::size_t index = 0;
  double value = 0.0;
  double min = 0.0;
  double max = 0.0;
  bool missing = false;  ///< family absent or has the wrong number of values

  std::string describe() const;
};

/// Parameter values for an n-HRU basin. Cheap to copy (flat vectors).
class ParameterSet {
 public:
  ParameterSet() = default;
  ParameterSet(std::shared_ptr<const ParameterRegistry> registry, std::size_t n_hru);

  const ParameterRegistry& registry() const { return *registry_; }
  std::shared_ptr<const ParameterRegistry> registry_ptr() const { return registry_; }
  std::size_t hru_count() const { return n_hru_; }

  /// Value for an HRU in a calendar month (1..12); scope/cadence resolved here.
  double value(ParamId id, std::size_t hru = 0, unsigned month = 1) const {
    const auto& s = registry_->spec(id);
    return values_[static_cast<std::size_t>(id)][flat_index(s, hru, month)];
  }
  double& at(ParamId id, std::size_t hru = 0, unsigned month = 1) {
    const auto& s = registry_->spec(id);
    return values_[static_cast<std::size_t>(id)][flat_index(s, hru, month)];
  }

  std::vector<double>& values(ParamId id) { return values_[static_cast<std::size_t>(id)]; }
  const std::vector<double>& values(ParamId id) const { return values_[static_cast<std::size_t>(id)]; }

  /// Assigns a family; a single value is broadcast to every instance.
  void set(ParamId id, std::vector<double> v);
  void set(ParamId id, double v) { set(id, std::vector<double>{v}); }

  bool operator==(const ParameterSet& o) const { return n_hru_ == o.n_hru_ && values_ == o.values_; }

  static std::size_t flat_index(const ParameterSpec& s, std::size_t hru, unsigned month) {
    std::size_t base = s.scope == Scope::PerHru ? hru * s.width() : 0;
    if (s.cadence == Cadence::Monthly && s.curve_width == 0) base += month - 1;
    return base;
  }

 private:
  std::shared_ptr<const ParameterRegistry> registry_;
  std::size_t n_hru_ = 0;
  std::array<std::vector<double>, kParamCount> values_;
};

/// Empty result iff every family is complete and every value is in range.
std::vector<ParameterViolation> validate_parameters(const ParameterSet& p);

/// Clamps every value into its legal range.
void clamp_parameters(ParameterSet& p);

/// Reads/writes the key-value parameter file (JSON object, one key per family).
ParameterSet load_parameters(const std::string& path, std::shared_ptr<const ParameterRegistry> registry,
                             std::size_t n_hru);
ParameterSet parse_parameters(std::string_view json_text, std::shared_ptr<const ParameterRegistry> registry,
                              std::size_t n_hru);
std::string dump_parameters(const ParameterSet& p);

}  // namespace prmsda

/**
 * @file layout.hpp
 * @brief Mapping between model objects and the flat filter vector.
 *
 * State-only vectors hold the 12 filtered fields of every HRU. Joint vectors
 * hold, per HRU, the 12 fields followed by the 9 per-HRU parameter families,
 * then the 4 basin-wide parameter families, then the previous-day and
 * current-day basin runoff (cfs).
 */
#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "prmsda/parameters.hpp"
#include "prmsda/types.hpp"

namespace prmsda {

enum class FilterMode { StateOnly, Joint };

enum class SlotKind { HruState, HruParameter, GlobalParameter, RunoffPrevious, RunoffCurrent };

struct Slot {
  SlotKind kind = SlotKind::HruState;
  std::size_t hru = 0;
  std::size_t field = 0;  ///< state field index or ParamId value
};

/// Per-HRU parameter families appended in joint mode.
inline constexpr std::array<ParamId, 9> kJointHruParameters = {
    ParamId::SmidxCoef,  ParamId::CareaMax,   ParamId::SoilmoistMax, ParamId::GwflowCoef, ParamId::Soil2gwMax,
    ParamId::GwsinkCoef, ParamId::Ssr2gwRate, ParamId::SsrcoefSq,    ParamId::SsrcoefLin};

/// Basin-wide parameter families appended in joint mode. For monthly families
/// the slot carries the value of the current simulation month, and an update
/// of that slot shifts all twelve months by the same amount.
inline constexpr std::array<ParamId, 4> kJointGlobalParameters = {ParamId::TmaxAllsnow, ParamId::TmaxAllrain,
                                                                  ParamId::DdayIntcp, ParamId::JhCoef};

class StateLayout {
 public:
  StateLayout() = default;
  StateLayout(FilterMode mode, std::size_t n_hru);

  FilterMode mode() const { return mode_; }
  std::size_t hru_count() const { return n_hru_; }
  std::size_t size() const { return slots_.size(); }
  const Slot& slot(std::size_t i) const { return slots_[i]; }
  const std::vector<Slot>& slots() const { return slots_; }

  std::size_t state_index(std::size_t hru, StateField f) const {
    return hru * stride() + static_cast<std::size_t>(f);
  }
  std::size_t hru_parameter_index(std::size_t hru, std::size_t family) const {
    return hru * stride() + kFilteredStateCount + family;
  }
  std::size_t global_parameter_index(std::size_t family) const { return n_hru_ * stride() + family; }
  std::size_t runoff_previous_index() const { return n_hru_ * stride() + kJointGlobalParameters.size(); }
  std::size_t runoff_current_index() const { return runoff_previous_index() + 1; }

  bool is_parameter(std::size_t i) const {
    return slots_[i].kind == SlotKind::HruParameter || slots_[i].kind == SlotKind::GlobalParameter;
  }

  /// Checks the parameter set has every family the layout augments.
  void check_parameters(const ParameterSet& p) const;

  /// Writes the model objects of one member into `out` (size()).
  void pack(std::span<const HruState> states, const ParameterSet& params, unsigned month, double runoff_previous,
            double runoff_current, Eigen::Ref<Eigen::VectorXd> out) const;
  /// Inverse of pack: overwrites the filtered fields, augmented parameters and runoff slots.
  void unpack(const Eigen::Ref<const Eigen::VectorXd>& in, unsigned month, std::span<HruState> states,
              ParameterSet& params, double& runoff_previous, double& runoff_current) const;

 private:
  std::size_t stride() const {
    return kFilteredStateCount + (mode_ == FilterMode::Joint ? kJointHruParameters.size() : 0);
  }

  FilterMode mode_ = FilterMode::StateOnly;
  std::size_t n_hru_ = 0;
  std::vector<Slot> slots_;
};

}  // namespace prmsda

#include "prmsda/layout.hpp"

#include "prmsda/errors.hpp"

namespace prmsda {

StateLayout::StateLayout(FilterMode mode, std::size_t n_hru) : mode_(mode), n_hru_(n_hru) {
  for (std::size_t h = 0; h < n_hru; ++h) {
    for (std::size_t f = 0; f < kFilteredStateCount; ++f) slots_.push_back({SlotKind::HruState, h, f});
    if (mode == FilterMode::Joint) {
      for (ParamId id : kJointHruParameters) {
        slots_.push_back({SlotKind::HruParameter, h, static_cast<std::size_t>(id)});
      }
    }
  }
  if (mode == FilterMode::Joint) {
    for (ParamId id : kJointGlobalParameters) {
      slots_.push_back({SlotKind::GlobalParameter, 0, static_cast<std::size_t>(id)});
    }
    slots_.push_back({SlotKind::RunoffPrevious, 0, 0});
    slots_.push_back({SlotKind::RunoffCurrent, 0, 0});
  }
}

void StateLayout::check_parameters(const ParameterSet& p) const {
  if (mode_ != FilterMode::Joint) return;
  auto check = [&](ParamId id) {
    const auto& spec = p.registry().spec(id);
    if (p.values(id).size() != spec.count(p.hru_count())) {
      throw ConfigError("augmented parameter '" + std::string(spec.name) + "' missing from parameter set");
    }
  };
  for (ParamId id : kJointHruParameters) check(id);
  for (ParamId id : kJointGlobalParameters) check(id);
}

void StateLayout::pack(std::span<const HruState> states, const ParameterSet& params, unsigned month,
                       double runoff_previous, double runoff_current, Eigen::Ref<Eigen::VectorXd> out) const {
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    const Slot& s = slots_[i];
    switch (s.kind) {
      case SlotKind::HruState: out[i] = field(states[s.hru], s.field); break;
      case SlotKind::HruParameter:
      case SlotKind::GlobalParameter: out[i] = params.value(static_cast<ParamId>(s.field), s.hru, month); break;
      case SlotKind::RunoffPrevious: out[i] = runoff_previous; break;
      case SlotKind::RunoffCurrent: out[i] = runoff_current; break;
    }
  }
}

void StateLayout::unpack(const Eigen::Ref<const Eigen::VectorXd>& in, unsigned month, std::span<HruState> states,
                         ParameterSet& params, double& runoff_previous, double& runoff_current) const {
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    const Slot& s = slots_[i];
    switch (s.kind) {
      case SlotKind::HruState: field(states[s.hru], s.field) = in[i]; break;
      case SlotKind::HruParameter:
      case SlotKind::GlobalParameter: {
        const auto id = static_cast<ParamId>(s.field);
        const auto& spec = params.registry().spec(id);
        if (spec.cadence == Cadence::Monthly && spec.curve_width == 0) {
          // The update found for this month shifts the whole annual cycle.
          const double delta = in[i] - params.value(id, s.hru, month);
          if (delta != 0.0) {
            for (unsigned mo = 1; mo <= 12; ++mo) params.at(id, s.hru, mo) += delta;
          }
        } else {
          params.at(id, s.hru, month) = in[i];
        }
        break;
      }
      case SlotKind::RunoffPrevious: runoff_previous = in[i]; break;
      case SlotKind::RunoffCurrent: runoff_current = in[i]; break;
    }
  }
}

}  // namespace prmsda

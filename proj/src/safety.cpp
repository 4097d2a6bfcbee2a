#include "ethd/safety.hpp"

#include <cmath>

namespace ethd {

const char* safety_mode_name(SafetyMode m) {
  switch (m) {
    case SafetyMode::Nominal: return "nominal";
    case SafetyMode::Passthrough: return "passthrough";
    case SafetyMode::Halted: return "halted";
    case SafetyMode::EStop: return "estop";
  }
  return "?";
}

const char* safety_cause_name(SafetyCause c) {
  switch (c) {
    case SafetyCause::None: return "none";
    case SafetyCause::HeadIntrusion: return "head_intrusion";
    case SafetyCause::OutsideSafeZone: return "outside_safe_zone";
    case SafetyCause::OperatorStop: return "operator_stop";
    case SafetyCause::OperatorReset: return "operator_reset";
    case SafetyCause::Cleared: return "cleared";
  }
  return "?";
}

bool check_head(const Vec3& head, const SafetyConfig& cfg) {
  return distance(head, cfg.workspace_center) < cfg.workspace_radius_m;
}

bool check_safe_zone(const Vec3& p, const SafetyConfig& cfg) {
  return std::abs(p.x - cfg.safe_zone.center.x) <= cfg.safe_zone.half_x_m &&
         std::abs(p.y - cfg.safe_zone.center.y) <= cfg.safe_zone.half_y_m;
}

SafetyState step_safety(const SafetyState& state, const SafetyInputs& in,
                        const SafetyConfig& cfg, Micros now) {
  const bool latched_estop =
      (state.mode == SafetyMode::EStop && !in.estop_reset) || in.estop;
  const bool intrusion = in.head_valid && check_head(in.head, cfg);

  SafetyMode mode = SafetyMode::Nominal;
  SafetyCause cause = SafetyCause::None;
  if (latched_estop) {
    mode = SafetyMode::EStop;
    cause = SafetyCause::OperatorStop;
  } else if (intrusion) {
    mode = SafetyMode::Halted;
    cause = SafetyCause::HeadIntrusion;
  } else if (in.passthrough_active) {
    mode = SafetyMode::Passthrough;
    cause = SafetyCause::OutsideSafeZone;
  }

  if (mode == state.mode) return state;

  SafetyState next;
  next.mode = mode;
  next.entered_at_us = now;
  if (mode == SafetyMode::Nominal) {
    next.cause = state.mode == SafetyMode::EStop ? SafetyCause::OperatorReset
                                                 : SafetyCause::Cleared;
  } else {
    next.cause = cause;
  }
  return next;
}

}  // namespace ethd

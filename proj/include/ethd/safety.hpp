// Online safety gating. Head intrusion into the robot workspace halts the
// plant on the same tick; leaving the floor safe zone activates headset
// passthrough; an operator e-stop latches until an explicit reset. Priority:
// EStop > Halted > Passthrough > Nominal. The monitor only ever blocks the
// sequencer, never advances it.

#ifndef ETHD_SAFETY_HPP
#define ETHD_SAFETY_HPP

#include "ethd/geometry.hpp"

namespace ethd {

struct SafeZone {
  Vec3 center;            // on the floor plane; z ignored
  double half_x_m = 0.3;
  double half_y_m = 0.3;
};

struct SafetyConfig {
  Vec3 workspace_center;  // robot base, board frame
  double workspace_radius_m = 0.8;
  SafeZone safe_zone;
};

enum class SafetyMode { Nominal, Passthrough, Halted, EStop };
enum class SafetyCause {
  None,
  HeadIntrusion,
  OutsideSafeZone,
  OperatorStop,
  OperatorReset,
  Cleared,
};

const char* safety_mode_name(SafetyMode m);
const char* safety_cause_name(SafetyCause c);

struct SafetyState {
  SafetyMode mode = SafetyMode::Nominal;
  SafetyCause cause = SafetyCause::None;
  Micros entered_at_us = 0;

  bool nominal() const { return mode == SafetyMode::Nominal; }
};

// Head inside the open workspace ball.
bool check_head(const Vec3& head, const SafetyConfig& cfg);

// Ground projection inside the closed safe-zone rectangle.
bool check_safe_zone(const Vec3& head_ground_projection, const SafetyConfig& cfg);

struct SafetyInputs {
  Vec3 head;                 // freshest delivered head pose
  bool head_valid = false;
  bool estop = false;        // operator stop asserted this tick
  bool estop_reset = false;  // explicit operator reset
  bool passthrough_active = false;  // headset-reported safe-zone state
};

// One safety evaluation per robot tick. EStop is latched; Halted follows the
// delivered head pose; Passthrough follows the headset report.
SafetyState step_safety(const SafetyState& state, const SafetyInputs& in,
                        const SafetyConfig& cfg, Micros now);

}  // namespace ethd

#endif  // ETHD_SAFETY_HPP

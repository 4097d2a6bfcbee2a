// Interaction sequencing state machine. Phases advance strictly in order:
//
//   AwaitUserAtMark -> RobotToReady -> AvatarApproach -> AvatarArmRaise
//     -> StrategyEngaged -> ContactDetected -> Retreat -> Complete
//
// A non-nominal safety state pauses the machine (timers stop, no
// transitions); it never reorders or skips phases.

#ifndef ETHD_SEQUENCER_HPP
#define ETHD_SEQUENCER_HPP

#include <cstdint>

#include "ethd/geometry.hpp"
#include "ethd/safety.hpp"

namespace ethd {

enum class Phase : std::uint8_t {
  AwaitUserAtMark,
  RobotToReady,
  AvatarApproach,
  AvatarArmRaise,
  StrategyEngaged,
  ContactDetected,
  Retreat,
  Complete,
};
constexpr int kPhaseCount = 8;

const char* phase_name(Phase p);

// Timing-only avatar: the arm rig affects visuals, not contact logic.
struct AvatarTimingModel {
  double approach_duration_s = 3.0;
  double arm_raise_duration_s = 1.2;
};

struct SequencerInputs {
  bool user_at_mark = false;
  bool robot_at_ready = false;
  bool strategy_contact = false;
  bool retreat_done = false;
};

enum class GuidanceEvent : std::uint8_t {
  GoToMark,
  HoldForRobot,
  AvatarEntering,
  AvatarRaisingArm,
  RespondNow,
  ContactMade,
  Retreating,
  SessionEnd,
};

GuidanceEvent emit_guidance(Phase phase);
const char* guidance_name(GuidanceEvent g);

// The input or timer whose assertion enters the given phase.
const char* phase_entry_cause(Phase p);

class Sequencer {
 public:
  explicit Sequencer(AvatarTimingModel timing = {}) : timing_(timing) {}

  struct StepResult {
    Phase phase;
    bool advanced = false;       // a transition happened on this step
    bool engaged_edge = false;   // entered StrategyEngaged (avatar ready cue)
    bool paused = false;
  };

  // Call once per robot tick with the tick period. Pure in (state, inputs,
  // safety): replaying a logged script reproduces identical transitions.
  StepResult step(const SequencerInputs& in, const SafetyState& safety,
                  Micros now, Micros dt);

  Phase phase() const { return phase_; }
  Micros phase_entered_us() const { return phase_entered_us_; }

 private:
  AvatarTimingModel timing_;
  Phase phase_ = Phase::AwaitUserAtMark;
  Micros phase_entered_us_ = 0;
  Micros phase_active_us_ = 0;  // time in phase excluding safety pauses
};

}  // namespace ethd

#endif  // ETHD_SEQUENCER_HPP

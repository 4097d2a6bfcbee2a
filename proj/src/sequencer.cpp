#include "ethd/sequencer.hpp"

namespace ethd {

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::AwaitUserAtMark: return "await_user_at_mark";
    case Phase::RobotToReady: return "robot_to_ready";
    case Phase::AvatarApproach: return "avatar_approach";
    case Phase::AvatarArmRaise: return "avatar_arm_raise";
    case Phase::StrategyEngaged: return "strategy_engaged";
    case Phase::ContactDetected: return "contact_detected";
    case Phase::Retreat: return "retreat";
    case Phase::Complete: return "complete";
  }
  return "?";
}

GuidanceEvent emit_guidance(Phase phase) {
  switch (phase) {
    case Phase::AwaitUserAtMark: return GuidanceEvent::GoToMark;
    case Phase::RobotToReady: return GuidanceEvent::HoldForRobot;
    case Phase::AvatarApproach: return GuidanceEvent::AvatarEntering;
    case Phase::AvatarArmRaise: return GuidanceEvent::AvatarRaisingArm;
    case Phase::StrategyEngaged: return GuidanceEvent::RespondNow;
    case Phase::ContactDetected: return GuidanceEvent::ContactMade;
    case Phase::Retreat: return GuidanceEvent::Retreating;
    case Phase::Complete: return GuidanceEvent::SessionEnd;
  }
  return GuidanceEvent::GoToMark;
}

const char* phase_entry_cause(Phase p) {
  switch (p) {
    case Phase::AwaitUserAtMark: return "start";
    case Phase::RobotToReady: return "user_at_mark";
    case Phase::AvatarApproach: return "robot_at_ready";
    case Phase::AvatarArmRaise: return "approach_timer";
    case Phase::StrategyEngaged: return "arm_raise_timer";
    case Phase::ContactDetected: return "contact_force";
    case Phase::Retreat: return "immediate";
    case Phase::Complete: return "retreat_done";
  }
  return "?";
}

const char* guidance_name(GuidanceEvent g) {
  switch (g) {
    case GuidanceEvent::GoToMark: return "go_to_mark";
    case GuidanceEvent::HoldForRobot: return "hold_for_robot";
    case GuidanceEvent::AvatarEntering: return "avatar_entering";
    case GuidanceEvent::AvatarRaisingArm: return "avatar_raising_arm";
    case GuidanceEvent::RespondNow: return "respond_now";
    case GuidanceEvent::ContactMade: return "contact_made";
    case GuidanceEvent::Retreating: return "retreating";
    case GuidanceEvent::SessionEnd: return "session_end";
  }
  return "?";
}

Sequencer::StepResult Sequencer::step(const SequencerInputs& in,
                                      const SafetyState& safety, Micros now,
                                      Micros dt) {
  StepResult res;
  res.phase = phase_;

  if (!safety.nominal()) {
    // Paused: timers freeze, no transitions.
    res.paused = true;
    return res;
  }

  phase_active_us_ += dt;

  bool advance = false;
  switch (phase_) {
    case Phase::AwaitUserAtMark: advance = in.user_at_mark; break;
    case Phase::RobotToReady: advance = in.robot_at_ready; break;
    case Phase::AvatarApproach:
      advance = phase_active_us_ >= to_micros(timing_.approach_duration_s);
      break;
    case Phase::AvatarArmRaise:
      advance = phase_active_us_ >= to_micros(timing_.arm_raise_duration_s);
      break;
    case Phase::StrategyEngaged: advance = in.strategy_contact; break;
    case Phase::ContactDetected: advance = true; break;  // retreat immediately
    case Phase::Retreat: advance = in.retreat_done; break;
    case Phase::Complete: break;
  }

  if (advance) {
    phase_ = static_cast<Phase>(static_cast<int>(phase_) + 1);
    phase_entered_us_ = now;
    phase_active_us_ = 0;
    res.phase = phase_;
    res.advanced = true;
    res.engaged_edge = phase_ == Phase::StrategyEngaged;
  }
  return res;
}

}  // namespace ethd

#include "ethd/sim_world.hpp"

#include <cmath>
#include <memory>

namespace ethd {

namespace {

// Operator console pulses, robot side. The e-stop input is held for a short
// window; the latch in step_safety carries it beyond.
bool pulse_active(double at_s, Micros now) {
  if (at_s < 0.0) return false;
  const Micros t0 = to_micros(at_s);
  return now >= t0 && now < t0 + 100'000;
}

}  // namespace

// ---------------------------------------------------------------------------
// RobotSide

RobotSide::RobotSide(const Scenario& scenario, Endpoint* endpoint,
                     std::function<Vec3(Micros)> true_hand)
    : scenario_(scenario),
      endpoint_(endpoint),
      true_hand_(std::move(true_hand)),
      icfg_(scenario.interaction_config()),
      scfg_(scenario.safety_config()),
      sequencer_(scenario.avatar),
      plant_(scenario.prop_park),
      events_(scenario.redundancy) {
  plant_.max_speed_mps = scenario.plant_max_speed_mps;
  plant_.max_accel_mps2 = scenario.plant_max_accel_mps2;
  phase_log_.push_back({0, sequencer_.phase()});
  guidance_log_.push_back({0, emit_guidance(sequencer_.phase())});
}

void RobotSide::ingest() {
  for (const Datagram& d : endpoint_->poll()) {
    const auto res = wire::decode(d);
    if (!res) continue;  // malformed datagrams are dropped, not fatal
    const auto& msg = *res.message;
    if (const auto* hand = std::get_if<wire::HandPoseMsg>(&msg.payload)) {
      if (hand->tracked && msg.header.timestamp_us >= hand_est_ts_) {
        hand_est_ = wire::widen(hand->position);
        hand_est_ts_ = msg.header.timestamp_us;
      }
    } else if (const auto* head = std::get_if<wire::HeadPoseMsg>(&msg.payload)) {
      if (msg.header.timestamp_us >= head_est_ts_) {
        head_est_ = wire::widen(head->position);
        head_est_ts_ = msg.header.timestamp_us;
      }
    } else if (const auto* ev = std::get_if<wire::EventFlagsMsg>(&msg.payload)) {
      if (!dedup_.accept(*ev)) continue;
      if (ev->flags & wire::kUserAtMark) user_at_mark_latched_ = true;
      if (!any_event_applied_ || ev->event_seq >= last_event_seq_applied_) {
        peer_passthrough_ = (ev->flags & wire::kPassthroughActive) != 0;
        last_event_seq_applied_ = ev->event_seq;
        any_event_applied_ = true;
      }
    }
  }
}

Vec3 RobotSide::plant_target(Micros now) {
  switch (sequencer_.phase()) {
    case Phase::AwaitUserAtMark: return scenario_.prop_park;
    case Phase::RobotToReady:
    case Phase::AvatarApproach:
    case Phase::AvatarArmRaise: return scenario_.prop_ready;
    case Phase::StrategyEngaged: {
      if (!strategy_) strategy_.emplace(icfg_);
      const auto out = strategy_->step(now, hand_est_, plant_.position());
      last_weight_ = out.weight;
      return out.target;
    }
    case Phase::ContactDetected: return plant_.position();
    case Phase::Retreat:
    case Phase::Complete: return scenario_.retreat_pos;
  }
  return plant_.position();
}

void RobotSide::tick(Micros now) {
  ingest();

  // Safety gate, evaluated before any control action this tick.
  SafetyInputs sin;
  if (head_est_) {
    sin.head = *head_est_;
    sin.head_valid = true;
  }
  sin.estop = pulse_active(scenario_.estop_at_s, now);
  sin.estop_reset = pulse_active(scenario_.estop_reset_at_s, now);
  sin.passthrough_active = peer_passthrough_;
  const SafetyState prev_safety = safety_;
  safety_ = step_safety(safety_, sin, scfg_, now);
  if (safety_.mode != prev_safety.mode) {
    safety_log_.push_back({now, prev_safety.mode, safety_.mode, safety_.cause});
    if (safety_.mode == SafetyMode::EStop) {
      out_flags_ |= wire::kEmergencyStop;
      events_.announce(out_flags_);
    }
  }

  SequencerInputs sq;
  sq.user_at_mark = user_at_mark_latched_;
  sq.robot_at_ready = plant_.at(scenario_.prop_ready);
  sq.strategy_contact = contact_latched_;
  sq.retreat_done = plant_.at(scenario_.retreat_pos);
  const auto step = sequencer_.step(sq, safety_, now, kRobotTickUs);
  if (step.advanced) {
    phase_log_.push_back({now, step.phase});
    guidance_log_.push_back({now, emit_guidance(step.phase)});
    std::uint16_t flags = out_flags_;
    if (step.engaged_edge) {
      out_flags_ |= wire::kAvatarReady;
      flags = out_flags_;
    }
    events_.announce(flags | wire::kSequenceAdvance);
  }

  // Physical contact from ground truth geometry, snapshot at tick start.
  const Vec3 hand_true = true_hand_(now);
  const Vec3 pre_pos = plant_.position();
  const Vec3 pre_vel = plant_.velocity();
  const double force = contact_force(pre_pos, hand_true, scenario_.contact);
  if (!contact_latched_ && sequencer_.phase() == Phase::StrategyEngaged &&
      detect_contact(force, icfg_)) {
    contact_latched_ = true;
    t_physical_ = now;
    contact_plant_pos_ = pre_pos;
    out_flags_ |= wire::kContactDetected;
    events_.announce(out_flags_);
  }

  last_weight_ = 0.0;
  const Vec3 target = plant_target(now);
  const bool retreating = sequencer_.phase() >= Phase::Retreat;
  plant_.max_speed_mps =
      retreating ? scenario_.retreat_speed_mps : scenario_.plant_max_speed_mps;
  plant_.max_accel_mps2 =
      retreating ? scenario_.retreat_accel_mps2 : scenario_.plant_max_accel_mps2;
  if (safety_.nominal()) {
    plant_.step(target, to_seconds(kRobotTickUs));
  } else {
    plant_.freeze();
  }

  if (trace_enabled_) {
    trace_.push_back({now, target, plant_.position(), last_weight_, force});
  }

  // Telemetry out: end-effector state every tick, pending events piggybacked
  // on the same sender frame.
  wire::EndEffectorStateMsg ee;
  ee.position = wire::narrow(pre_pos);
  ee.velocity = wire::narrow(pre_vel);
  Vec3 force_vec{};
  if (force > 0.0 && distance(pre_pos, hand_true) > 0.0)
    force_vec = (pre_pos - hand_true).normalized() * force;  // reaction on the prop
  ee.force = wire::narrow(force_vec);
  sender_.send(*endpoint_, ee, now);
  for (const auto& ev : events_.frame_batch()) sender_.send(*endpoint_, ev, now);
}

// ---------------------------------------------------------------------------
// HeadsetSide

namespace {

ReachProfile make_reach_profile(const Scenario& s) {
  ReachProfile p;
  p.start = s.hand_rest;
  p.aim = ReachAim::PropPosition;
  p.fixed_aim = s.hand_rest;
  p.peak_speed_mps = s.resolved_peak_speed();
  p.jitter_sigma_m = s.hand_jitter_sigma_m;
  p.seed = derive_seed(s.seed, 0x4a9d);
  return p;
}

}  // namespace

HeadsetSide::HeadsetSide(const Scenario& scenario, Endpoint* endpoint)
    : scenario_(scenario),
      endpoint_(endpoint),
      head_script_(scenario.head_script()),
      hand_(make_reach_profile(scenario)),
      tracker_(scenario.tracking, derive_seed(scenario.seed, 0x9b01)),
      events_(scenario.redundancy) {
  const Vec3 to_prop = scenario.prop_ready - scenario.hand_rest;
  approach_dir_ = to_prop.norm() > 0.0 ? to_prop.normalized() : Vec3{-1, 0, 0};
}

Vec3 HeadsetSide::hand_truth(Micros t) const { return hand_.eval(t); }

void HeadsetSide::ingest(Micros now) {
  for (const Datagram& d : endpoint_->poll()) {
    const auto res = wire::decode(d);
    if (!res) continue;
    const auto& msg = *res.message;
    if (const auto* ee = std::get_if<wire::EndEffectorStateMsg>(&msg.payload)) {
      if (msg.header.timestamp_us >= prop_virtual_ts_) {
        prop_virtual_ = wire::widen(ee->position);
        prop_virtual_ts_ = msg.header.timestamp_us;
      }
    } else if (const auto* ev = std::get_if<wire::EventFlagsMsg>(&msg.payload)) {
      if (!dedup_.accept(*ev)) continue;
      if ((ev->flags & wire::kAvatarReady) && !avatar_ready_at_)
        avatar_ready_at_ = now;
      if (!any_event_applied_ || ev->event_seq >= last_event_seq_applied_) {
        last_event_seq_applied_ = ev->event_seq;
        any_event_applied_ = true;
      }
    }
  }
}

void HeadsetSide::frame(Micros now) {
  ingest(now);

  const Vec3 head = head_script_.eval(now);
  wire::HeadPoseMsg head_msg;
  head_msg.position = wire::narrow(head);
  sender_.send(*endpoint_, head_msg, now);

  // User responds once the avatar signals readiness.
  if (!scenario_.hand_stationary && !hand_.started() && avatar_ready_at_ &&
      now >= *avatar_ready_at_ + to_micros(scenario_.reaction_delay_s)) {
    const Vec3 prop = prop_virtual_.value_or(scenario_.prop_ready);
    hand_.set_aim(prop + approach_dir_ * scenario_.resolved_overshoot());
    hand_.begin(now);
  }

  // Closed-loop aiming at the live virtual prop until follow-through: once
  // the hand touches the prop the remaining motion is ballistic.
  if (hand_.started() && !hand_.aim_frozen() && prop_virtual_) {
    if (distance(hand_.eval(now), *prop_virtual_) <=
        scenario_.contact.contact_radius_m) {
      hand_.freeze_aim();
    } else {
      hand_.set_aim(*prop_virtual_ +
                    approach_dir_ * scenario_.resolved_overshoot());
    }
  }

  const Vec3 truth = hand_.eval(now);
  tracker_.record(now, truth);
  const auto sample = tracker_.sample(now);

  wire::HandPoseMsg hand_msg;
  hand_msg.hand_id = 1;  // right
  hand_msg.tracked = sample.tracked ? 1 : 0;
  hand_msg.position = wire::narrow(sample.position);
  sender_.send(*endpoint_, hand_msg, now);

  // Mark arrival and safe-zone monitoring (ground-projected, headset rate).
  const bool at_mark =
      std::hypot(head.x - scenario_.head_mark.x, head.y - scenario_.head_mark.y) <=
      scenario_.mark_radius_m;
  const bool in_zone = check_safe_zone(head, scenario_.safety_config());
  if (in_zone) zone_armed_ = true;
  const bool pass = zone_armed_ && !in_zone;
  if (pass && !passthrough_since_) passthrough_since_ = now;  // first activation
  passthrough_ = pass;

  std::uint16_t flags = 0;
  if (at_mark) flags |= wire::kUserAtMark;
  if (passthrough_) flags |= wire::kPassthroughActive;
  if (flags != out_flags_) {
    out_flags_ = flags;
    events_.announce(out_flags_);
  }
  for (const auto& ev : events_.frame_batch()) sender_.send(*endpoint_, ev, now);

  // Virtual collision: tracked hand intersects the virtual prop sphere.
  if (!t_virtual_ && avatar_ready_at_ && sample.tracked && prop_virtual_ &&
      distance(sample.position, *prop_virtual_) <
          scenario_.contact.contact_radius_m) {
    t_virtual_ = now;
  }
}

// ---------------------------------------------------------------------------
// VirtualWorld

VirtualWorld::VirtualWorld(const Scenario& scenario, bool trace)
    : scenario_(scenario) {
  ChannelConfig r2h = scenario.transport;
  r2h.seed = derive_seed(scenario.seed, 0xc0de1);
  ChannelConfig h2r = scenario.transport;
  h2r.seed = derive_seed(scenario.seed, 0xc0de2);
  link_ = std::make_unique<LoopbackLink>(&clock_, r2h, h2r);

  headset_ = std::make_unique<HeadsetSide>(scenario, &link_->b());
  robot_ = std::make_unique<RobotSide>(
      scenario, &link_->a(),
      [this](Micros t) { return headset_->hand_truth(t); });
  robot_->enable_trace(trace);
}

void VirtualWorld::run(const std::function<bool()>& done) {
  const Micros horizon = to_micros(scenario_.horizon_s);
  Micros next_tick = 0;
  int frame_index = 0;
  Micros next_frame =
      HeadsetSide::frame_time(frame_index, scenario_.tracking.sample_rate_hz);

  while (next_tick <= horizon || next_frame <= horizon) {
    if (next_tick <= next_frame) {  // ties: robot first
      if (next_tick > horizon) break;
      clock_.advance_to(next_tick);
      robot_->tick(next_tick);
      next_tick += kRobotTickUs;
      if (done && done()) return;
    } else {
      if (next_frame > horizon) break;
      clock_.advance_to(next_frame);
      headset_->frame(next_frame);
      ++frame_index;
      next_frame = HeadsetSide::frame_time(frame_index,
                                           scenario_.tracking.sample_rate_hz);
    }
  }
}

}  // namespace ethd

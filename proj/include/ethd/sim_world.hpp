// The two loop sides of the system, transport-agnostic so the same logic
// runs under the deterministic virtual clock (in-process loopback) and in
// the two-process real-time mode (UDP).
//
// Robot side, every 1000 Hz tick: ingest datagrams -> safety -> sequencer ->
// interaction control -> physical contact -> plant -> telemetry out.
// Headset side, every ~90 Hz frame: ingest -> head/hand simulation ->
// tracking sample -> mark/safe-zone flags -> virtual collision -> telemetry.

#ifndef ETHD_SIM_WORLD_HPP
#define ETHD_SIM_WORLD_HPP

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "ethd/channel.hpp"
#include "ethd/controller.hpp"
#include "ethd/safety.hpp"
#include "ethd/scenario.hpp"
#include "ethd/sequencer.hpp"
#include "ethd/simuser.hpp"

namespace ethd {

constexpr Micros kRobotTickUs = 1000;  // 1000 Hz

struct SafetyTransition {
  Micros t = 0;
  SafetyMode from = SafetyMode::Nominal;
  SafetyMode to = SafetyMode::Nominal;
  SafetyCause cause = SafetyCause::None;
};

struct PhaseTransition {
  Micros t = 0;
  Phase phase = Phase::AwaitUserAtMark;
};

struct GuidanceRecord {
  Micros t = 0;
  GuidanceEvent event = GuidanceEvent::GoToMark;
};

struct ControllerTraceRow {
  Micros t = 0;
  Vec3 target;
  Vec3 plant;
  double weight = 0.0;
  double force_n = 0.0;
};

class RobotSide {
 public:
  // true_hand evaluates the physical hand position at any tick time (the
  // contact force is a ground-truth quantity, never the tracked estimate).
  RobotSide(const Scenario& scenario, Endpoint* endpoint,
            std::function<Vec3(Micros)> true_hand);

  void tick(Micros now);

  const EndEffectorPlant& plant() const { return plant_; }
  Phase phase() const { return sequencer_.phase(); }
  const SafetyState& safety() const { return safety_; }
  std::optional<Micros> t_physical() const { return t_physical_; }
  std::optional<Vec3> hand_estimate() const { return hand_est_; }
  const std::optional<Vec3>& contact_plant_pos() const { return contact_plant_pos_; }

  const std::vector<SafetyTransition>& safety_log() const { return safety_log_; }
  const std::vector<PhaseTransition>& phase_log() const { return phase_log_; }
  const std::vector<GuidanceRecord>& guidance_log() const { return guidance_log_; }
  const std::vector<ControllerTraceRow>& trace() const { return trace_; }
  void enable_trace(bool on) { trace_enabled_ = on; }

 private:
  void ingest();
  Vec3 plant_target(Micros now);

  Scenario scenario_;
  Endpoint* endpoint_;
  std::function<Vec3(Micros)> true_hand_;

  InteractionConfig icfg_;
  SafetyConfig scfg_;
  Sequencer sequencer_;
  EndEffectorPlant plant_;
  std::optional<InteractionController> strategy_;

  wire::MessageSender sender_;
  wire::RedundantEventSender events_;
  wire::EventDeduper dedup_;

  // Mailboxes: latest delivered value wins.
  std::optional<Vec3> hand_est_;
  std::uint64_t hand_est_ts_ = 0;
  std::optional<Vec3> head_est_;
  std::uint64_t head_est_ts_ = 0;
  std::uint32_t last_event_seq_applied_ = 0;
  bool any_event_applied_ = false;

  bool user_at_mark_latched_ = false;
  bool peer_passthrough_ = false;
  bool contact_latched_ = false;
  double last_weight_ = 0.0;
  std::optional<Micros> t_physical_;
  std::optional<Vec3> contact_plant_pos_;

  SafetyState safety_;
  std::uint16_t out_flags_ = 0;

  bool trace_enabled_ = false;
  std::vector<SafetyTransition> safety_log_;
  std::vector<PhaseTransition> phase_log_;
  std::vector<GuidanceRecord> guidance_log_;
  std::vector<ControllerTraceRow> trace_;
};

class HeadsetSide {
 public:
  HeadsetSide(const Scenario& scenario, Endpoint* endpoint);

  void frame(Micros now);

  // Physical hand ground truth at any time (aim state is piecewise constant
  // between frames). Used by the in-process harness to feed the robot side.
  Vec3 hand_truth(Micros t) const;

  std::optional<Micros> t_virtual() const { return t_virtual_; }
  bool passthrough_active() const { return passthrough_; }
  // First frame at which passthrough engaged, if it ever did.
  std::optional<Micros> passthrough_since() const { return passthrough_since_; }
  bool reach_started() const { return hand_.started(); }

  static Micros frame_time(int index, double rate_hz) {
    return HandTracker::frame_time(index, rate_hz);
  }

 private:
  void ingest(Micros now);

  Scenario scenario_;
  Endpoint* endpoint_;

  HeadScript head_script_;
  HandModel hand_;
  HandTracker tracker_;
  Vec3 approach_dir_;

  wire::MessageSender sender_;
  wire::RedundantEventSender events_;
  wire::EventDeduper dedup_;

  std::optional<Vec3> prop_virtual_;
  std::uint64_t prop_virtual_ts_ = 0;
  std::uint32_t last_event_seq_applied_ = 0;
  bool any_event_applied_ = false;

  std::optional<Micros> avatar_ready_at_;
  bool zone_armed_ = false;  // zone monitoring starts once the user arrives
  bool passthrough_ = false;
  std::optional<Micros> passthrough_since_;
  std::uint16_t out_flags_ = 0;
  std::optional<Micros> t_virtual_;
};

// Interleaves robot ticks and headset frames by timestamp under the virtual
// clock; ties run the robot first.
class VirtualWorld {
 public:
  VirtualWorld(const Scenario& scenario, bool trace = false);

  // Runs until `done` returns true or the horizon elapses. `done` is checked
  // after every robot tick.
  void run(const std::function<bool()>& done = nullptr);

  SimClock& clock() { return clock_; }
  RobotSide& robot() { return *robot_; }
  HeadsetSide& headset() { return *headset_; }

 private:
  Scenario scenario_;
  SimClock clock_;
  std::unique_ptr<LoopbackLink> link_;
  std::unique_ptr<HeadsetSide> headset_;
  std::unique_ptr<RobotSide> robot_;
};

}  // namespace ethd

#endif  // ETHD_SIM_WORLD_HPP

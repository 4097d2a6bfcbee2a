#include "ethd/realtime.hpp"

#include <chrono>
#include <cstdio>
#include <thread>

#include "ethd/udp.hpp"

namespace ethd {

namespace {

using SteadyClock = std::chrono::steady_clock;

Micros since(const SteadyClock::time_point& t0) {
  return std::chrono::duration_cast<std::chrono::microseconds>(
             SteadyClock::now() - t0)
      .count();
}

// Robot-process replica of the physical hand (see header note).
class PhysicalHand {
 public:
  explicit PhysicalHand(const Scenario& s)
      : scenario_(s), hand_([&s] {
          ReachProfile p;
          p.start = s.hand_rest;
          p.aim = ReachAim::PropPosition;
          p.fixed_aim = s.hand_rest;
          p.peak_speed_mps = s.resolved_peak_speed();
          p.jitter_sigma_m = s.hand_jitter_sigma_m;
          p.seed = derive_seed(s.seed, 0x4a9d);
          return p;
        }()) {
    const Vec3 to_prop = s.prop_ready - s.hand_rest;
    dir_ = to_prop.norm() > 0.0 ? to_prop.normalized() : Vec3{-1, 0, 0};
  }

  void update(Micros now, Phase phase, const Vec3& prop) {
    if (scenario_.hand_stationary) return;
    if (!engaged_at_ && phase >= Phase::StrategyEngaged) engaged_at_ = now;
    if (!hand_.started() && engaged_at_ &&
        now >= *engaged_at_ + to_micros(scenario_.reaction_delay_s)) {
      hand_.set_aim(prop + dir_ * scenario_.resolved_overshoot());
      hand_.begin(now);
    }
    if (hand_.started() && !hand_.aim_frozen()) {
      if (distance(hand_.eval(now), prop) <= scenario_.contact.contact_radius_m)
        hand_.freeze_aim();
      else
        hand_.set_aim(prop + dir_ * scenario_.resolved_overshoot());
    }
  }

  Vec3 eval(Micros t) const { return hand_.eval(t); }

 private:
  Scenario scenario_;
  HandModel hand_;
  Vec3 dir_;
  std::optional<Micros> engaged_at_;
};

}  // namespace

TrialRecord serve_robot(const Scenario& scenario, const RealtimeOptions& opts) {
  const std::uint16_t local = opts.local_port ? opts.local_port : kRobotPort;
  const std::uint16_t remote = opts.remote_port ? opts.remote_port : kHeadsetPort;
  UdpEndpoint endpoint(local, opts.peer_host, remote);

  PhysicalHand hand(scenario);
  RobotSide robot(scenario, &endpoint,
                  [&hand](Micros t) { return hand.eval(t); });

  const auto t0 = SteadyClock::now();
  const Micros horizon = to_micros(scenario.horizon_s);
  Micros next_tick = 0;
  while (next_tick <= horizon) {
    std::this_thread::sleep_until(t0 + std::chrono::microseconds(next_tick));
    const Micros now = next_tick;  // nominal tick time
    hand.update(now, robot.phase(), robot.plant().position());
    robot.tick(now);
    if (robot.phase() == Phase::Complete && robot.t_physical() &&
        since(t0) > *robot.t_physical() + 500'000)
      break;
    next_tick += kRobotTickUs;
  }

  TrialRecord rec;
  rec.seed = scenario.seed;
  rec.kind = scenario.kind;
  rec.strategy = scenario.strategy;
  rec.t_physical_us = robot.t_physical();
  rec.phase_log = robot.phase_log();
  rec.safety_log = robot.safety_log();
  rec.status = robot.phase() == Phase::Complete ? TrialStatus::Completed
                                                : TrialStatus::TrialTimeout;
  std::printf("robot: final phase %s, physical contact %s\n",
              phase_name(robot.phase()),
              rec.t_physical_us ? std::to_string(*rec.t_physical_us).c_str()
                                : "none");
  return rec;
}

TrialRecord serve_headset(const Scenario& scenario, const RealtimeOptions& opts) {
  const std::uint16_t local = opts.local_port ? opts.local_port : kHeadsetPort;
  const std::uint16_t remote = opts.remote_port ? opts.remote_port : kRobotPort;
  UdpEndpoint endpoint(local, opts.peer_host, remote);

  HeadsetSide headset(scenario, &endpoint);

  const auto t0 = SteadyClock::now();
  const Micros horizon = to_micros(scenario.horizon_s);
  int frame = 0;
  for (;;) {
    const Micros t =
        HeadsetSide::frame_time(frame, scenario.tracking.sample_rate_hz);
    if (t > horizon) break;
    std::this_thread::sleep_until(t0 + std::chrono::microseconds(t));
    headset.frame(t);
    ++frame;
  }

  TrialRecord rec;
  rec.seed = scenario.seed;
  rec.kind = scenario.kind;
  rec.strategy = scenario.strategy;
  rec.t_virtual_us = headset.t_virtual();
  rec.status = rec.t_virtual_us ? TrialStatus::Completed : TrialStatus::TrialTimeout;
  std::printf("headset: virtual collision %s\n",
              rec.t_virtual_us ? std::to_string(*rec.t_virtual_us).c_str()
                               : "none");
  return rec;
}

}  // namespace ethd

// The simulated human: a minimum-jerk hand reach (optionally re-aimed at the
// live prop each headset frame), a scripted head path, and the headset-side
// tracking pipeline that samples the hand at 90 Hz with injected latency,
// noise and dropout — the stand-in for markerless hand tracking.

#ifndef ETHD_SIMUSER_HPP
#define ETHD_SIMUSER_HPP

#include <deque>
#include <vector>

#include "ethd/geometry.hpp"
#include "ethd/rng.hpp"

namespace ethd {

enum class ReachAim { FixedPoint, PropPosition };

struct ReachProfile {
  Vec3 start;
  ReachAim aim = ReachAim::FixedPoint;
  Vec3 fixed_aim;
  double peak_speed_mps = 1.0;  // 0.6 suits handover, 1.0 bump/five
  double duration_s = 0.0;      // 0 -> derived from peak speed and distance
  double jitter_sigma_m = 0.002;
  std::uint64_t seed = 0;
};

// Hand ground truth. Before begin() the hand rests at profile.start; after,
// it follows a minimum-jerk profile toward the aim point. For
// ReachAim::PropPosition the caller feeds the live aim once per headset
// frame via set_aim() until freeze_aim(); position tracks the moving goal.
class HandModel {
 public:
  explicit HandModel(const ReachProfile& profile);

  void begin(Micros t0);
  bool started() const { return started_; }

  void set_aim(const Vec3& aim);
  void freeze_aim() { aim_frozen_ = true; }
  bool aim_frozen() const { return aim_frozen_; }
  const Vec3& aim() const { return aim_; }

  // Ground-truth position; minimum jerk plus per-millisecond seeded jitter.
  Vec3 eval(Micros t) const;

  double duration_s() const { return duration_s_; }

 private:
  Vec3 nominal(Micros t) const;

  ReachProfile profile_;
  Vec3 aim_;
  bool aim_frozen_ = false;
  bool started_ = false;
  Micros t0_us_ = 0;
  double duration_s_ = 0.0;
};

struct TrackingPipeline {
  double sample_rate_hz = 90.0;
  double latency_ms = 30.0;
  double noise_sigma_m = 0.002;
  double dropout_rate = 0.0;
};

// Delayed, noisy resampling of a truth stream. Truth positions are recorded
// as they are produced; samples read the history at (emit - latency) with
// linear interpolation between recorded points.
class HandTracker {
 public:
  HandTracker(const TrackingPipeline& cfg, std::uint64_t seed);

  void record(Micros t, const Vec3& truth);

  struct Sample {
    bool tracked = false;
    Vec3 position;
  };
  Sample sample(Micros emit_time);

  static Micros frame_time(int frame_index, double rate_hz) {
    return to_micros(static_cast<double>(frame_index) / rate_hz);
  }

 private:
  Vec3 history_at(Micros t) const;

  TrackingPipeline cfg_;
  Rng rng_;
  struct Point {
    Micros t;
    Vec3 p;
  };
  std::deque<Point> history_;
};

// Piecewise-linear scripted head path (walk to the mark, stand, optional
// excursions for the safety scenarios).
struct HeadScript {
  struct Waypoint {
    Micros t;
    Vec3 p;
  };
  std::vector<Waypoint> waypoints;

  Vec3 eval(Micros t) const;
};

}  // namespace ethd

#endif  // ETHD_SIMUSER_HPP

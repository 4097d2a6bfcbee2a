// Robot-side interaction control. Two strategies:
//
//   static  - the prop holds the pre-aligned ready pose until contact.
//   dynamic - once the tracked hand enters the interaction volume, a
//             one-second minimum-jerk trajectory toward the prop/hand
//             midpoint is blended with the live hand position:
//
//                 w(t) = (e^(3a) - 1) / (e^3 - 1),  a = min(t_dynamic, 1)
//                 x_target(t) = (1 - w) * x_midTraj(t) + w * x_hand(t)
//
//             so motion starts smooth and converges to tracking the hand
//             exactly after one second.
//
// Contact is declared when the end-effector force strictly exceeds the
// per-interaction threshold (7.5 N handover, 15 N fist bump / high five).

#ifndef ETHD_CONTROLLER_HPP
#define ETHD_CONTROLLER_HPP

#include <optional>

#include "ethd/geometry.hpp"

namespace ethd {

enum class InteractionKind { Handover, FistBump, HighFive };
enum class Strategy { Static, Dynamic };

const char* kind_name(InteractionKind k);
const char* strategy_name(Strategy s);

double default_force_threshold(InteractionKind kind);

// Trigger region in prop-local axes: +x is the outward (approach) axis,
// width spans local y, height spans local z. Swap width/height in config to
// flip the cross-section mapping.
struct VolumeSpec {
  double width_m = 0.10;
  double height_m = 0.30;
  double depth_m = 0.30;
};

struct InteractionConfig {
  InteractionKind kind = InteractionKind::Handover;
  Strategy strategy = Strategy::Static;
  double force_threshold_n = 7.5;
  Pose ready_pose;
  VolumeSpec interaction_volume;
};

// Blend weight of the dynamic strategy; 0 at engagement, exactly 1 from one
// second on.
double blend_weight(double t_dynamic_s);

// Initial trajectory computed at trigger time: prop position toward the
// prop/hand midpoint over one second, minimum-jerk profile.
struct MidTrajectory {
  Vec3 start;
  Vec3 goal;
  double duration_s = 1.0;
  Micros t0_us = 0;
};

Vec3 mid_trajectory_point(const MidTrajectory& traj, double t_s);

// x_target per the weighted average above; reduces to the hand exactly for
// t_dynamic >= 1 s.
Vec3 dynamic_target(const MidTrajectory& traj, const Vec3& hand,
                    double t_dynamic_s);

// Hand inside [0, depth] along the prop's outward axis and within the
// cross-section (boundaries inclusive).
bool volume_contains(const VolumeSpec& volume, const Pose& prop_pose,
                     const Vec3& hand);

// Kinematic end-effector stand-in for the torque-controlled arm: tracks a
// target point under hard speed and acceleration limits at 1000 Hz, lands on
// the target exactly and holds it.
class EndEffectorPlant {
 public:
  double max_speed_mps = 1.0;
  double max_accel_mps2 = 5.0;

  EndEffectorPlant() = default;
  explicit EndEffectorPlant(const Vec3& start) : position_(start) {}

  const Vec3& position() const { return position_; }
  const Vec3& velocity() const { return velocity_; }

  void step(const Vec3& target, double dt_s = 0.001);
  // Immediate stop in place (safety halt).
  void freeze() { velocity_ = {}; }
  bool at(const Vec3& target, double tol_m = 1e-9) const {
    return distance(position_, target) <= tol_m && velocity_.norm() <= 1e-9;
  }

 private:
  Vec3 position_;
  Vec3 velocity_;
};

// Linear spring between the prop sphere and the hand point.
struct ContactModel {
  double stiffness_n_per_m = 2000.0;
  double contact_radius_m = 0.05;
};

double contact_force(const Vec3& prop, const Vec3& hand,
                     const ContactModel& model);

// Strict inequality: the threshold itself does not trigger.
bool detect_contact(double force_n, const InteractionConfig& config);

// Per-tick strategy state machine producing the plant target while the
// sequencer has the strategy engaged. The dynamic trigger consumes the
// delivered (delayed, sampled) hand estimate, never ground truth.
class InteractionController {
 public:
  explicit InteractionController(const InteractionConfig& config);

  struct Output {
    Vec3 target;
    double weight = 0.0;       // 0 while not blending
    bool blending = false;
  };

  Output step(Micros now, const std::optional<Vec3>& hand_estimate,
              const Vec3& plant_position);

  const std::optional<MidTrajectory>& trajectory() const { return traj_; }

 private:
  InteractionConfig config_;
  std::optional<MidTrajectory> traj_;  // set once the volume trigger fires
  Vec3 last_hand_;                     // latest delivered estimate while blending
};

}  // namespace ethd

#endif  // ETHD_CONTROLLER_HPP

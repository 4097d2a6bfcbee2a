#include "ethd/controller.hpp"

#include <cmath>

namespace ethd {

const char* kind_name(InteractionKind k) {
  switch (k) {
    case InteractionKind::Handover: return "handover";
    case InteractionKind::FistBump: return "fistbump";
    case InteractionKind::HighFive: return "highfive";
  }
  return "?";
}

const char* strategy_name(Strategy s) {
  return s == Strategy::Static ? "static" : "dynamic";
}

double default_force_threshold(InteractionKind kind) {
  // Handover is gentler; fist bump and high five involve strong impacts.
  switch (kind) {
    case InteractionKind::Handover: return 7.5;
    case InteractionKind::FistBump: return 15.0;
    case InteractionKind::HighFive: return 15.0;
  }
  return 15.0;
}

double blend_weight(double t_dynamic_s) {
  if (t_dynamic_s < 0.0)
    throw std::invalid_argument("blend_weight: negative time");
  const double a = std::min(t_dynamic_s, 1.0);
  return (std::exp(3.0 * a) - 1.0) / (std::exp(3.0) - 1.0);
}

Vec3 mid_trajectory_point(const MidTrajectory& traj, double t_s) {
  const double u = std::min(t_s / traj.duration_s, 1.0);
  return traj.start + (traj.goal - traj.start) * min_jerk_s(u);
}

Vec3 dynamic_target(const MidTrajectory& traj, const Vec3& hand,
                    double t_dynamic_s) {
  const double w = blend_weight(t_dynamic_s);
  return mid_trajectory_point(traj, t_dynamic_s) * (1.0 - w) + hand * w;
}

bool volume_contains(const VolumeSpec& volume, const Pose& prop_pose,
                     const Vec3& hand) {
  const Vec3 local =
      prop_pose.orientation.conjugate().rotate(hand - prop_pose.position);
  return local.x >= 0.0 && local.x <= volume.depth_m &&
         std::abs(local.y) <= 0.5 * volume.width_m &&
         std::abs(local.z) <= 0.5 * volume.height_m;
}

void EndEffectorPlant::step(const Vec3& target, double dt_s) {
  if (dt_s <= 0.0) throw std::invalid_argument("plant: dt must be > 0");

  const Vec3 to = target - position_;
  const double d = to.norm();

  // Desired velocity: braking curve toward the target with a one-tick
  // landing pad (max_accel*dt^2) inside which the commanded speed is d/dt,
  // so the final step lands on the target and the stop stays within the
  // acceleration limit. The 0.95 keeps the discrete braking inside the
  // continuous curve.
  Vec3 desired{};
  if (d > 0.0) {
    const double pad = max_accel_mps2 * dt_s * dt_s;
    double v;
    if (d <= pad) {
      v = d / dt_s;
    } else {
      v = std::min(0.95 * std::sqrt(2.0 * max_accel_mps2 * (d - pad)),
                   d / dt_s);
    }
    v = std::min(v, max_speed_mps);
    desired = to * (v / d);
  }

  const Vec3 dv = desired - velocity_;
  const double dv_norm = dv.norm();
  const double dv_max = max_accel_mps2 * dt_s;
  velocity_ = dv_norm <= dv_max ? desired : velocity_ + dv * (dv_max / dv_norm);

  position_ += velocity_ * dt_s;
  if (distance(position_, target) <= 1e-9) position_ = target;
}

double contact_force(const Vec3& prop, const Vec3& hand,
                     const ContactModel& model) {
  const double penetration = model.contact_radius_m - distance(prop, hand);
  return penetration > 0.0 ? model.stiffness_n_per_m * penetration : 0.0;
}

bool detect_contact(double force_n, const InteractionConfig& config) {
  return force_n > config.force_threshold_n;
}

InteractionController::InteractionController(const InteractionConfig& config)
    : config_(config) {}

InteractionController::Output InteractionController::step(
    Micros now, const std::optional<Vec3>& hand_estimate,
    const Vec3& plant_position) {
  Output out;
  out.target = config_.ready_pose.position;

  if (config_.strategy == Strategy::Static) return out;

  if (!traj_ && hand_estimate &&
      volume_contains(config_.interaction_volume, config_.ready_pose,
                      *hand_estimate)) {
    // Trigger: plan from where the prop actually is toward the midpoint of
    // prop and hand at this instant.
    MidTrajectory traj;
    traj.start = plant_position;
    traj.goal = (plant_position + *hand_estimate) * 0.5;
    traj.duration_s = 1.0;
    traj.t0_us = now;
    traj_ = traj;
    last_hand_ = *hand_estimate;
  }

  if (!traj_) return out;  // armed, waiting for the hand

  if (hand_estimate) last_hand_ = *hand_estimate;
  const double t_dynamic = to_seconds(now - traj_->t0_us);
  out.target = dynamic_target(*traj_, last_hand_, t_dynamic);
  out.weight = blend_weight(t_dynamic);
  out.blending = true;
  return out;
}

}  // namespace ethd

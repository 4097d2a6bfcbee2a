#include "ethd/geometry.hpp"

namespace ethd {

const char* frame_name(FrameId f) {
  switch (f) {
    case FrameId::Board: return "board";
    case FrameId::RobotBase: return "robot_base";
    case FrameId::Headset: return "headset";
    case FrameId::World: return "world";
  }
  return "?";
}

Vec3 Vec3::normalized() const {
  const double n = norm();
  if (n == 0.0) throw std::domain_error("Vec3: cannot normalize zero vector");
  return *this / n;
}

Quat Quat::normalized() const {
  const double n = norm();
  if (n == 0.0) throw std::domain_error("Quat: cannot normalize zero quaternion");
  return {w / n, x / n, y / n, z / n};
}

Quat Quat::from_axis_angle(const Vec3& axis, double angle_rad) {
  const Vec3 u = axis.normalized();
  const double h = 0.5 * angle_rad;
  const double s = std::sin(h);
  return {std::cos(h), u.x * s, u.y * s, u.z * s};
}

Quat Quat::from_rotation_vector(const Vec3& rotvec) {
  const double angle = rotvec.norm();
  if (angle < 1e-12) {
    // First-order expansion keeps the map smooth through zero.
    Quat q{1.0, 0.5 * rotvec.x, 0.5 * rotvec.y, 0.5 * rotvec.z};
    return q.normalized();
  }
  return from_axis_angle(rotvec, angle);
}

double quat_angle(const Quat& a, const Quat& b) {
  const double d =
      std::abs(a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z);
  return 2.0 * std::acos(std::min(1.0, d));
}

Vec3 apply(const Transform& t, const Vec3& p) {
  return t.rotation.rotate(p) + t.translation;
}

Transform compose(const Transform& a, const Transform& b) {
  if (b.to_frame != a.from_frame) {
    throw FrameMismatch(std::string("compose: frame mismatch (") +
                        frame_name(b.to_frame) + " -> " +
                        frame_name(a.from_frame) + ")");
  }
  Transform r;
  r.rotation = (a.rotation * b.rotation).normalized();
  r.translation = a.rotation.rotate(b.translation) + a.translation;
  r.from_frame = b.from_frame;
  r.to_frame = a.to_frame;
  return r;
}

Transform inverse(const Transform& t) {
  Transform r;
  r.rotation = t.rotation.conjugate();
  r.translation = -r.rotation.rotate(t.translation);
  r.from_frame = t.to_frame;
  r.to_frame = t.from_frame;
  return r;
}

Transform transform_from_pose(const Pose& pose, FrameId posed) {
  return {pose.orientation, pose.position, posed, pose.frame};
}

double min_jerk_s(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double u3 = u * u * u;
  return u3 * (10.0 - 15.0 * u + 6.0 * u * u);
}

double min_jerk_sdot(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  const double u2 = u * u;
  return 30.0 * u2 * (1.0 - u) * (1.0 - u);
}

}  // namespace ethd

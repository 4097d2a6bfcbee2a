// Frames, rigid transforms and the simulation clock shared by every subsystem.
//
// Positions are metres (double), time is integer microseconds since scenario
// start. All pose data is anchored to the fiducial board frame.

#ifndef ETHD_GEOMETRY_HPP
#define ETHD_GEOMETRY_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ethd {

using Micros = std::int64_t;

constexpr Micros kMicrosPerSecond = 1'000'000;

inline double to_seconds(Micros t) { return static_cast<double>(t) * 1e-6; }
inline Micros to_micros(double seconds) {
  return static_cast<Micros>(std::llround(seconds * 1e6));
}

enum class FrameId : std::uint8_t { Board, RobotBase, Headset, World };

const char* frame_name(FrameId f);

struct FrameMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  Vec3 operator-() const { return {-x, -y, -z}; }
  bool operator==(const Vec3&) const = default;

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  double norm_sq() const { return dot(*this); }
  bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
  }
  Vec3 normalized() const;
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

// Unit quaternion. Normalization keeps the norm within 1e-9 of 1.
struct Quat {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool operator==(const Quat&) const = default;

  double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }
  Quat normalized() const;
  Quat conjugate() const { return {w, -x, -y, -z}; }
  Quat operator*(const Quat& o) const {
    return {w * o.w - x * o.x - y * o.y - z * o.z,
            w * o.x + x * o.w + y * o.z - z * o.y,
            w * o.y - x * o.z + y * o.w + z * o.x,
            w * o.z + x * o.y - y * o.x + z * o.w};
  }
  Vec3 rotate(const Vec3& v) const {
    const Vec3 im{x, y, z};
    const Vec3 t = 2.0 * im.cross(v);
    return v + w * t + im.cross(t);
  }

  static Quat identity() { return {1.0, 0.0, 0.0, 0.0}; }
  static Quat from_axis_angle(const Vec3& axis, double angle_rad);
  // Exponential map of a rotation vector (axis * angle).
  static Quat from_rotation_vector(const Vec3& rotvec);
};

// Smallest rotation angle taking a onto b, in radians.
double quat_angle(const Quat& a, const Quat& b);

struct Pose {
  Vec3 position;
  Quat orientation = Quat::identity();
  FrameId frame = FrameId::Board;

  bool finite() const { return position.finite() && std::isfinite(orientation.norm()); }
};

// Rigid map taking points expressed in from_frame to to_frame.
struct Transform {
  Quat rotation = Quat::identity();
  Vec3 translation;
  FrameId from_frame = FrameId::Board;
  FrameId to_frame = FrameId::Board;

  static Transform identity(FrameId f) { return {Quat::identity(), {}, f, f}; }
};

// apply(t, p): p expressed in t.from_frame -> p expressed in t.to_frame.
Vec3 apply(const Transform& t, const Vec3& p);

// compose(a, b): applying the result equals applying b first, then a.
// Requires b.to_frame == a.from_frame; throws FrameMismatch otherwise.
Transform compose(const Transform& a, const Transform& b);

Transform inverse(const Transform& t);

// A pose of frame `posed` expressed in pose.frame, viewed as the transform
// posed -> pose.frame.
Transform transform_from_pose(const Pose& pose, FrameId posed);

// Minimum-jerk interpolation profile s(u) = 10u^3 - 15u^4 + 6u^5 on [0,1],
// clamped outside. s(0)=0, s(1)=1, s(0.5)=0.5, zero velocity/accel at ends.
double min_jerk_s(double u);
// d s / d u. Peak value 1.875 at u = 0.5.
double min_jerk_sdot(double u);

// Monotone simulation clock. Advances only through explicit calls; time
// never runs backwards.
class SimClock {
 public:
  Micros now() const { return now_us_; }
  void advance_to(Micros t) {
    if (t < now_us_)
      throw std::logic_error("SimClock: time cannot run backwards");
    now_us_ = t;
  }
  void advance(Micros dt) { advance_to(now_us_ + dt); }

 private:
  Micros now_us_ = 0;
};

}  // namespace ethd

#endif  // ETHD_GEOMETRY_HPP

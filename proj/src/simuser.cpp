#include "ethd/simuser.hpp"

#include <algorithm>

namespace ethd {

HandModel::HandModel(const ReachProfile& profile)
    : profile_(profile), aim_(profile.fixed_aim) {
  if (profile_.peak_speed_mps <= 0.0)
    throw std::invalid_argument("ReachProfile: peak speed must be > 0");
}

void HandModel::begin(Micros t0) {
  started_ = true;
  t0_us_ = t0;
  // Minimum-jerk peak speed is 1.875 * distance / duration; with no explicit
  // duration we derive one from the requested peak speed.
  const double dist = distance(aim_, profile_.start);
  duration_s_ = profile_.duration_s > 0.0
                    ? profile_.duration_s
                    : 1.875 * dist / profile_.peak_speed_mps;
  if (duration_s_ <= 0.0) duration_s_ = 1e-3;  // degenerate zero-length reach
}

void HandModel::set_aim(const Vec3& aim) {
  if (!aim_frozen_) aim_ = aim;
}

Vec3 HandModel::nominal(Micros t) const {
  if (!started_ || t <= t0_us_) return profile_.start;
  const double u = to_seconds(t - t0_us_) / duration_s_;
  return profile_.start + (aim_ - profile_.start) * min_jerk_s(u);
}

Vec3 HandModel::eval(Micros t) const {
  Vec3 p = nominal(t);
  if (profile_.jitter_sigma_m > 0.0) {
    // Keyed by millisecond tick so evaluation order and count cannot change
    // the stream.
    const std::uint64_t tick = static_cast<std::uint64_t>(t / 1000);
    p += keyed_gaussian_vec3(derive_seed(profile_.seed, 0x7a4d), tick,
                             profile_.jitter_sigma_m);
  }
  return p;
}

HandTracker::HandTracker(const TrackingPipeline& cfg, std::uint64_t seed)
    : cfg_(cfg), rng_(derive_seed(seed, 0x77ac4)) {
  if (cfg_.sample_rate_hz <= 0.0)
    throw std::invalid_argument("TrackingPipeline: rate must be > 0");
  if (cfg_.latency_ms < 0.0)
    throw std::invalid_argument("TrackingPipeline: latency must be >= 0");
}

void HandTracker::record(Micros t, const Vec3& truth) {
  if (!history_.empty() && t < history_.back().t)
    throw std::invalid_argument("HandTracker: truth must be recorded in order");
  history_.push_back({t, truth});
  // Keep a little more than the delay horizon.
  const Micros horizon = t - to_micros(cfg_.latency_ms * 1e-3) - 200'000;
  while (history_.size() > 2 && history_[1].t <= horizon) history_.pop_front();
}

Vec3 HandTracker::history_at(Micros t) const {
  if (history_.empty())
    throw std::logic_error("HandTracker: no truth recorded yet");
  if (t <= history_.front().t) return history_.front().p;
  if (t >= history_.back().t) return history_.back().p;
  // Binary search for the segment containing t.
  auto it = std::lower_bound(
      history_.begin(), history_.end(), t,
      [](const Point& a, Micros tt) { return a.t < tt; });
  const Point& hi = *it;
  const Point& lo = *(it - 1);
  const double u = static_cast<double>(t - lo.t) / static_cast<double>(hi.t - lo.t);
  return lo.p + (hi.p - lo.p) * u;
}

HandTracker::Sample HandTracker::sample(Micros emit_time) {
  Sample s;
  const bool dropped = cfg_.dropout_rate > 0.0 && rng_.bernoulli(cfg_.dropout_rate);
  const Micros t = emit_time - to_micros(cfg_.latency_ms * 1e-3);
  Vec3 p = history_at(t);
  if (cfg_.noise_sigma_m > 0.0) p += rng_.gaussian_vec3(cfg_.noise_sigma_m);
  s.position = p;
  s.tracked = !dropped;
  return s;
}

Vec3 HeadScript::eval(Micros t) const {
  if (waypoints.empty()) return {};
  if (t <= waypoints.front().t) return waypoints.front().p;
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    if (t <= waypoints[i].t) {
      const auto& a = waypoints[i - 1];
      const auto& b = waypoints[i];
      if (b.t == a.t) return b.p;
      const double u =
          static_cast<double>(t - a.t) / static_cast<double>(b.t - a.t);
      return a.p + (b.p - a.p) * u;
    }
  }
  return waypoints.back().p;
}

}  // namespace ethd

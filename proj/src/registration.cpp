#include "ethd/registration.hpp"

#include <algorithm>
#include <cmath>

#include "ethd/rng.hpp"

namespace ethd {

namespace {

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// 1.4826 * MAD: consistent sigma estimate under Gaussian noise.
double robust_sigma(const std::vector<double>& v) {
  const double med = median_of(v);
  std::vector<double> dev(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) dev[i] = std::abs(v[i] - med);
  return 1.4826 * median_of(dev);
}

Vec3 coordinate_median(const std::vector<Vec3>& pts) {
  std::vector<double> xs(pts.size()), ys(pts.size()), zs(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    xs[i] = pts[i].x;
    ys[i] = pts[i].y;
    zs[i] = pts[i].z;
  }
  return {median_of(xs), median_of(ys), median_of(zs)};
}

// Component median with hemisphere alignment, then normalized. Good enough
// as a robust reference for small rotational noise.
Quat reference_quat(const std::vector<Quat>& qs) {
  std::vector<double> w(qs.size()), x(qs.size()), y(qs.size()), z(qs.size());
  const Quat& ref = qs.front();
  for (std::size_t i = 0; i < qs.size(); ++i) {
    Quat q = qs[i];
    const double dot = q.w * ref.w + q.x * ref.x + q.y * ref.y + q.z * ref.z;
    if (dot < 0.0) q = {-q.w, -q.x, -q.y, -q.z};
    w[i] = q.w;
    x[i] = q.x;
    y[i] = q.y;
    z[i] = q.z;
  }
  return Quat{median_of(w), median_of(x), median_of(y), median_of(z)}
      .normalized();
}

}  // namespace

void RegistrationWindow::add(const BoardSample& s) {
  if (!samples.empty() && s.timestamp_us < samples.back().timestamp_us)
    throw std::invalid_argument("RegistrationWindow: samples must arrive in order");
  samples.push_back(s);
  const Micros horizon = s.timestamp_us - to_micros(duration_s);
  std::size_t keep_from = 0;
  while (keep_from < samples.size() && samples[keep_from].timestamp_us < horizon)
    ++keep_from;
  if (keep_from > 0) samples.erase(samples.begin(), samples.begin() + keep_from);
}

std::vector<BoardSample> generate_samples(const Pose& truth,
                                          const NoiseModel& model,
                                          double rate_hz, double duration_s) {
  if (rate_hz <= 0.0 || duration_s <= 0.0)
    throw std::invalid_argument("generate_samples: rate and duration must be > 0");
  const int n = static_cast<int>(rate_hz * duration_s);
  Rng rng(derive_seed(model.seed, 0xb0a2d));
  std::vector<BoardSample> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    BoardSample s;
    s.timestamp_us = to_micros(static_cast<double>(i) / rate_hz);
    s.pose = truth;
    s.pose.position += model.bias_m;
    if (model.gaussian_sigma_m > 0.0)
      s.pose.position += rng.gaussian_vec3(model.gaussian_sigma_m);
    if (model.gaussian_sigma_rot_rad > 0.0) {
      const Vec3 rotvec = rng.gaussian_vec3(model.gaussian_sigma_rot_rad);
      s.pose.orientation =
          (Quat::from_rotation_vector(rotvec) * truth.orientation).normalized();
    }
    if (model.outlier_rate > 0.0 && rng.bernoulli(model.outlier_rate))
      s.pose.position += rng.unit_vector() * model.outlier_offset_m;
    out.push_back(s);
  }
  return out;
}

AnchorTransform register_window(const RegistrationWindow& window,
                                const RegistrationSettings& settings) {
  // Canonical processing order: by timestamp, ties by position bytes, so the
  // result is independent of arrival permutation.
  std::vector<BoardSample> samples = window.samples;
  std::sort(samples.begin(), samples.end(),
            [](const BoardSample& a, const BoardSample& b) {
              if (a.timestamp_us != b.timestamp_us)
                return a.timestamp_us < b.timestamp_us;
              const Vec3 &pa = a.pose.position, &pb = b.pose.position;
              if (pa.x != pb.x) return pa.x < pb.x;
              if (pa.y != pb.y) return pa.y < pb.y;
              return pa.z < pb.z;
            });

  if (static_cast<int>(samples.size()) < settings.min_samples)
    throw InsufficientSamples("register: " + std::to_string(samples.size()) +
                              " samples, need " +
                              std::to_string(settings.min_samples));

  std::vector<Vec3> positions(samples.size());
  std::vector<Quat> quats(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    positions[i] = samples[i].pose.position;
    quats[i] = samples[i].pose.orientation;
  }

  const Vec3 med = coordinate_median(positions);
  const Quat qref = reference_quat(quats);

  std::vector<double> pos_dist(samples.size()), rot_dist(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    pos_dist[i] = distance(positions[i], med);
    rot_dist[i] = quat_angle(quats[i], qref);
  }
  // Robust z-score gate: distances are folded (always >= 0), so the gate is
  // centred on their median. Zero-noise windows degenerate to gate == median
  // == 0, keeping exact duplicates and dropping anything perturbed.
  const double pos_gate =
      median_of(pos_dist) + settings.reject_nsigma * robust_sigma(pos_dist);
  const double rot_gate =
      median_of(rot_dist) + settings.reject_nsigma * robust_sigma(rot_dist);

  Vec3 pos_sum;
  double qw = 0, qx = 0, qy = 0, qz = 0;
  std::vector<Vec3> accepted;
  accepted.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (pos_dist[i] > pos_gate || rot_dist[i] > rot_gate) continue;
    pos_sum += positions[i];
    Quat q = quats[i];
    const double dot = q.w * qref.w + q.x * qref.x + q.y * qref.y + q.z * qref.z;
    if (dot < 0.0) q = {-q.w, -q.x, -q.y, -q.z};
    qw += q.w;
    qx += q.x;
    qy += q.y;
    qz += q.z;
    accepted.push_back(positions[i]);
  }

  if (static_cast<int>(accepted.size()) < settings.min_samples)
    throw InsufficientSamples("register: " + std::to_string(accepted.size()) +
                              " accepted after rejection, need " +
                              std::to_string(settings.min_samples));

  const double n = static_cast<double>(accepted.size());
  const Vec3 mean_pos = pos_sum / n;
  const Quat mean_q = Quat{qw / n, qx / n, qy / n, qz / n}.normalized();

  double sq = 0.0;
  for (const Vec3& p : accepted) sq += (p - mean_pos).norm_sq();

  // Mean pose is the board as seen from the headset; the anchor maps the
  // other way.
  Pose mean_pose{mean_pos, mean_q, FrameId::Headset};
  AnchorTransform anchor;
  anchor.transform = inverse(transform_from_pose(mean_pose, FrameId::Board));
  anchor.sample_count = static_cast<int>(accepted.size());
  anchor.residual_rms_m = std::sqrt(sq / n);
  return anchor;
}

double colocation_error(const AnchorTransform& anchor, const Pose& truth,
                        std::span<const Vec3> probes) {
  if (probes.empty())
    throw std::invalid_argument("colocation_error: probes must be non-empty");
  const Transform true_anchor =
      inverse(transform_from_pose(truth, FrameId::Board));
  double sum = 0.0;
  for (const Vec3& p : probes)
    sum += distance(apply(anchor.transform, p), apply(true_anchor, p));
  return sum / static_cast<double>(probes.size());
}

BoardOffsetResult calibrate_board_offset(std::span<const PosePair> pairs) {
  if (pairs.size() < 3)
    throw InsufficientPoses("calibrate_board_offset: need >= 3 pose pairs, got " +
                            std::to_string(pairs.size()));
  Vec3 sum;
  for (const PosePair& p : pairs)
    sum += p.mocap_observed.position - p.robot_reported.position;
  const Vec3 offset = sum / static_cast<double>(pairs.size());

  double sq = 0.0;
  for (const PosePair& p : pairs) {
    const Vec3 r =
        p.mocap_observed.position - (p.robot_reported.position + offset);
    sq += r.norm_sq();
  }

  BoardOffsetResult result;
  result.offset = {Quat::identity(), offset, FrameId::RobotBase,
                   FrameId::RobotBase};
  result.residual_rms_m = std::sqrt(sq / static_cast<double>(pairs.size()));
  return result;
}

}  // namespace ethd

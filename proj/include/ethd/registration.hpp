// Fiducial-based physical-virtual registration: noisy board-pose samples are
// averaged over a five-second window with MAD-based outlier rejection to
// produce the headset->board anchor transform. A seeded noise generator
// stands in for real marker detection.

#ifndef ETHD_REGISTRATION_HPP
#define ETHD_REGISTRATION_HPP

#include <span>
#include <stdexcept>
#include <vector>

#include "ethd/geometry.hpp"

namespace ethd {

// One detected board pose, as seen from the headset.
struct BoardSample {
  Pose pose;  // frame == Headset; the posed frame is Board
  Micros timestamp_us = 0;
};

// Rolling capture window. add() maintains the invariants: samples sorted by
// timestamp, all within duration_s of the newest.
struct RegistrationWindow {
  double duration_s = 5.0;
  std::vector<BoardSample> samples;

  void add(const BoardSample& s);
};

struct AnchorTransform {
  Transform transform;  // Headset -> Board
  int sample_count = 0;       // accepted samples
  double residual_rms_m = 0.0;
};

// Synthetic detection noise replacing the real computer-vision pipeline.
struct NoiseModel {
  double gaussian_sigma_m = 0.003;
  double gaussian_sigma_rot_rad = 0.005;
  double outlier_rate = 0.05;
  double outlier_offset_m = 0.05;
  Vec3 bias_m{};
  std::uint64_t seed = 0;
};

struct RegistrationSettings {
  int min_samples = 30;
  double reject_nsigma = 3.0;
};

struct InsufficientSamples : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InsufficientPoses : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// floor(rate*duration) samples of `truth` perturbed by Gaussian noise plus
// bias; with probability outlier_rate the position is further displaced by
// outlier_offset_m in a uniformly random direction. Deterministic per seed.
std::vector<BoardSample> generate_samples(const Pose& truth,
                                          const NoiseModel& model,
                                          double rate_hz = 90.0,
                                          double duration_s = 5.0);

// Robust average of the window: a sample is dropped when its distance to the
// coordinate-wise position median exceeds the robust z-score gate
// median + reject_nsigma * (1.4826 * MAD), and likewise for its rotation
// distance to the median orientation; the rest are averaged (positions
// arithmetically, orientations by sign-aligned quaternion mean). Throws
// InsufficientSamples when fewer than min_samples survive.
AnchorTransform register_window(const RegistrationWindow& window,
                                const RegistrationSettings& settings = {});

// Mean Euclidean distance between probe points (headset frame) mapped through
// the estimated anchor and through the anchor implied by the true board pose.
double colocation_error(const AnchorTransform& anchor, const Pose& truth,
                        std::span<const Vec3> probes);

struct PosePair {
  Pose robot_reported;
  Pose mocap_observed;
};

struct BoardOffsetResult {
  Transform offset;       // correction to apply to robot-reported positions
  double residual_rms_m = 0.0;
};

// Averaged positional offset between robot-reported and mocap-observed
// end-point poses. Needs at least 3 pairs; throws InsufficientPoses.
BoardOffsetResult calibrate_board_offset(std::span<const PosePair> pairs);

}  // namespace ethd

#endif  // ETHD_REGISTRATION_HPP

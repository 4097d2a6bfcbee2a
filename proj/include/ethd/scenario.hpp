// Declarative scenario configuration. Files are plain hierarchical
// key-value text: one `section.key = value` per line, `#` comments, vectors
// as three space-separated numbers. Unknown keys are errors. The full
// schema with defaults is documented in the README and printed by
// `print_schema()`.

#ifndef ETHD_SCENARIO_HPP
#define ETHD_SCENARIO_HPP

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>

#include "ethd/channel.hpp"
#include "ethd/controller.hpp"
#include "ethd/registration.hpp"
#include "ethd/safety.hpp"
#include "ethd/sequencer.hpp"
#include "ethd/simuser.hpp"

namespace ethd {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

InteractionKind parse_kind(const std::string& s);
Strategy parse_strategy(const std::string& s);

struct Scenario {
  InteractionKind kind = InteractionKind::Handover;
  Strategy strategy = Strategy::Static;
  std::uint64_t seed = 1;
  double horizon_s = 20.0;

  // Geometry, board frame. +x runs from robot toward user, +z up.
  Vec3 robot_base{0.0, 0.0, 1.0};
  Vec3 prop_ready{0.45, 0.0, 1.0};
  Vec3 prop_park{0.05, -0.40, 1.0};
  Vec3 retreat_pos{0.05, -0.40, 1.0};

  VolumeSpec volume;
  ContactModel contact;
  double force_threshold_n = 0.0;  // 0 -> per-kind default

  double plant_max_speed_mps = 1.0;
  double plant_max_accel_mps2 = 5.0;
  // The retreat is a gentle disengage; its profile is not pinned by the
  // interaction design, so it gets its own limits.
  double retreat_speed_mps = 0.8;
  double retreat_accel_mps2 = 0.5;

  AvatarTimingModel avatar;

  double workspace_radius_m = 0.8;
  Vec3 zone_center{1.4, 0.0, 0.0};
  double zone_half_x_m = 0.3;
  double zone_half_y_m = 0.3;

  Vec3 head_start{2.2, 0.8, 1.7};
  Vec3 head_mark{1.4, 0.0, 1.7};
  double head_walk_duration_s = 2.0;
  double mark_radius_m = 0.15;
  // Safety-suite excursions; negative = disabled.
  double intrusion_at_s = -1.0;
  double intrusion_duration_s = 1.5;
  double zone_exit_at_s = -1.0;
  double zone_exit_duration_s = 2.0;

  // Rest pose just outside the interaction volume; the reach passes through
  // the prop with a follow-through so contact happens at steady speed.
  Vec3 hand_rest{0.80, -0.09, 0.96};
  double hand_peak_speed_mps = 0.0;  // 0 -> 0.6 handover, 1.0 otherwise
  double hand_overshoot_m = -1.0;    // <0 -> 0.10
  double hand_jitter_sigma_m = 0.002;
  double reaction_delay_s = 0.3;
  bool hand_stationary = false;  // park the hand at hand_rest for the trial

  TrackingPipeline tracking;

  ChannelConfig transport;  // applied to both directions (seeds derived)
  wire::RedundancyPolicy redundancy;

  double estop_at_s = -1.0;
  double estop_reset_at_s = -1.0;

  NoiseModel registration_noise;
  RegistrationSettings registration_settings;
  double registration_rate_hz = 90.0;
  double registration_duration_s = 5.0;

  static Scenario defaults(InteractionKind kind, Strategy strategy);

  double resolved_force_threshold() const {
    return force_threshold_n > 0.0 ? force_threshold_n
                                   : default_force_threshold(kind);
  }
  double resolved_peak_speed() const {
    if (hand_peak_speed_mps > 0.0) return hand_peak_speed_mps;
    return kind == InteractionKind::Handover ? 0.6 : 1.0;
  }
  double resolved_overshoot() const {
    return hand_overshoot_m >= 0.0 ? hand_overshoot_m : 0.10;
  }

  InteractionConfig interaction_config() const;
  SafetyConfig safety_config() const;
  HeadScript head_script() const;

  // Applies `section.key = value` overrides; throws ConfigError on unknown
  // keys or malformed values.
  void apply(const std::map<std::string, std::string>& kv);
};

// Parses config text into key/value pairs; throws ConfigError with line
// numbers on malformed lines.
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> load_config_file(const std::string& path);

void print_schema(std::ostream& os);

}  // namespace ethd

#endif  // ETHD_SCENARIO_HPP

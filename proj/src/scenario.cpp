#include "ethd/scenario.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace ethd {

InteractionKind parse_kind(const std::string& s) {
  if (s == "handover") return InteractionKind::Handover;
  if (s == "fistbump" || s == "fist-bump") return InteractionKind::FistBump;
  if (s == "highfive" || s == "high-five") return InteractionKind::HighFive;
  throw ConfigError("unknown interaction kind: '" + s +
                    "' (expected handover|fistbump|highfive)");
}

Strategy parse_strategy(const std::string& s) {
  if (s == "static") return Strategy::Static;
  if (s == "dynamic") return Strategy::Dynamic;
  throw ConfigError("unknown strategy: '" + s + "' (expected static|dynamic)");
}

Scenario Scenario::defaults(InteractionKind kind, Strategy strategy) {
  Scenario s;
  s.kind = kind;
  s.strategy = strategy;
  return s;
}

InteractionConfig Scenario::interaction_config() const {
  InteractionConfig cfg;
  cfg.kind = kind;
  cfg.strategy = strategy;
  cfg.force_threshold_n = resolved_force_threshold();
  cfg.ready_pose = Pose{prop_ready, Quat::identity(), FrameId::Board};
  cfg.interaction_volume = volume;
  return cfg;
}

SafetyConfig Scenario::safety_config() const {
  SafetyConfig cfg;
  cfg.workspace_center = robot_base;
  cfg.workspace_radius_m = workspace_radius_m;
  cfg.safe_zone = SafeZone{zone_center, zone_half_x_m, zone_half_y_m};
  return cfg;
}

HeadScript Scenario::head_script() const {
  HeadScript script;
  script.waypoints.push_back({0, head_start});
  script.waypoints.push_back({to_micros(head_walk_duration_s), head_mark});

  auto add_excursion = [&](double at_s, double duration_s, const Vec3& there) {
    const Micros t0 = to_micros(at_s);
    const Micros half = to_micros(0.5 * duration_s);
    script.waypoints.push_back({t0, head_mark});
    script.waypoints.push_back({t0 + half, there});
    script.waypoints.push_back({t0 + 2 * half, head_mark});
  };

  if (intrusion_at_s >= 0.0) {
    // Walk the head straight to the workspace centre and back.
    Vec3 inside = robot_base;
    inside.z = head_mark.z;
    add_excursion(intrusion_at_s, intrusion_duration_s, inside);
  }
  if (zone_exit_at_s >= 0.0) {
    Vec3 outside = zone_center;
    outside.y += zone_half_y_m + 0.5;
    outside.z = head_mark.z;
    add_excursion(zone_exit_at_s, zone_exit_duration_s, outside);
  }
  return script;
}

namespace {

double parse_double(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError("bad number for " + key + ": '" + v + "'");
  return d;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const unsigned long long u = std::strtoull(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError("bad integer for " + key + ": '" + v + "'");
  return u;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("bad bool for " + key + ": '" + v + "'");
}

Vec3 parse_vec3(const std::string& key, const std::string& v) {
  std::istringstream ss(v);
  Vec3 out;
  if (!(ss >> out.x >> out.y >> out.z))
    throw ConfigError("bad vec3 for " + key + ": '" + v +
                      "' (expected three numbers)");
  std::string rest;
  if (ss >> rest)
    throw ConfigError("bad vec3 for " + key + ": '" + v + "' (trailing data)");
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void Scenario::apply(const std::map<std::string, std::string>& kv) {
  for (const auto& [key, value] : kv) {
    if (key == "trial.kind") kind = parse_kind(value);
    else if (key == "trial.strategy") strategy = parse_strategy(value);
    else if (key == "trial.seed") seed = parse_u64(key, value);
    else if (key == "trial.horizon_s") horizon_s = parse_double(key, value);
    else if (key == "geometry.robot_base") robot_base = parse_vec3(key, value);
    else if (key == "geometry.prop_ready") prop_ready = parse_vec3(key, value);
    else if (key == "geometry.prop_park") prop_park = parse_vec3(key, value);
    else if (key == "geometry.retreat") retreat_pos = parse_vec3(key, value);
    else if (key == "volume.width_m") volume.width_m = parse_double(key, value);
    else if (key == "volume.height_m") volume.height_m = parse_double(key, value);
    else if (key == "volume.depth_m") volume.depth_m = parse_double(key, value);
    else if (key == "contact.stiffness_n_per_m")
      contact.stiffness_n_per_m = parse_double(key, value);
    else if (key == "contact.radius_m") contact.contact_radius_m = parse_double(key, value);
    else if (key == "contact.force_threshold_n")
      force_threshold_n = parse_double(key, value);
    else if (key == "plant.max_speed_mps") plant_max_speed_mps = parse_double(key, value);
    else if (key == "plant.max_accel_mps2") plant_max_accel_mps2 = parse_double(key, value);
    else if (key == "plant.retreat_speed_mps") retreat_speed_mps = parse_double(key, value);
    else if (key == "plant.retreat_accel_mps2") retreat_accel_mps2 = parse_double(key, value);
    else if (key == "avatar.approach_s") avatar.approach_duration_s = parse_double(key, value);
    else if (key == "avatar.arm_raise_s") avatar.arm_raise_duration_s = parse_double(key, value);
    else if (key == "safety.workspace_radius_m") workspace_radius_m = parse_double(key, value);
    else if (key == "safety.zone_center") zone_center = parse_vec3(key, value);
    else if (key == "safety.zone_half_x_m") zone_half_x_m = parse_double(key, value);
    else if (key == "safety.zone_half_y_m") zone_half_y_m = parse_double(key, value);
    else if (key == "head.start") head_start = parse_vec3(key, value);
    else if (key == "head.mark") head_mark = parse_vec3(key, value);
    else if (key == "head.walk_duration_s") head_walk_duration_s = parse_double(key, value);
    else if (key == "head.mark_radius_m") mark_radius_m = parse_double(key, value);
    else if (key == "head.intrusion_at_s") intrusion_at_s = parse_double(key, value);
    else if (key == "head.intrusion_duration_s") intrusion_duration_s = parse_double(key, value);
    else if (key == "head.zone_exit_at_s") zone_exit_at_s = parse_double(key, value);
    else if (key == "head.zone_exit_duration_s") zone_exit_duration_s = parse_double(key, value);
    else if (key == "hand.rest") hand_rest = parse_vec3(key, value);
    else if (key == "hand.peak_speed_mps") hand_peak_speed_mps = parse_double(key, value);
    else if (key == "hand.overshoot_m") hand_overshoot_m = parse_double(key, value);
    else if (key == "hand.jitter_sigma_m") hand_jitter_sigma_m = parse_double(key, value);
    else if (key == "hand.reaction_delay_s") reaction_delay_s = parse_double(key, value);
    else if (key == "hand.stationary") hand_stationary = parse_bool(key, value);
    else if (key == "tracking.sample_rate_hz") tracking.sample_rate_hz = parse_double(key, value);
    else if (key == "tracking.latency_ms") tracking.latency_ms = parse_double(key, value);
    else if (key == "tracking.noise_sigma_m") tracking.noise_sigma_m = parse_double(key, value);
    else if (key == "tracking.dropout_rate") tracking.dropout_rate = parse_double(key, value);
    else if (key == "transport.loss_rate") transport.loss_rate = parse_double(key, value);
    else if (key == "transport.latency_us")
      transport.latency_us = static_cast<Micros>(parse_u64(key, value));
    else if (key == "transport.jitter_us")
      transport.jitter_us = static_cast<Micros>(parse_u64(key, value));
    else if (key == "events.repeat_count")
      redundancy.repeat_count = static_cast<int>(parse_u64(key, value));
    else if (key == "estop.at_s") estop_at_s = parse_double(key, value);
    else if (key == "estop.reset_at_s") estop_reset_at_s = parse_double(key, value);
    else if (key == "registration.sigma_m") registration_noise.gaussian_sigma_m = parse_double(key, value);
    else if (key == "registration.sigma_rot_rad")
      registration_noise.gaussian_sigma_rot_rad = parse_double(key, value);
    else if (key == "registration.outlier_rate") registration_noise.outlier_rate = parse_double(key, value);
    else if (key == "registration.outlier_offset_m")
      registration_noise.outlier_offset_m = parse_double(key, value);
    else if (key == "registration.bias_m") registration_noise.bias_m = parse_vec3(key, value);
    else if (key == "registration.rate_hz") registration_rate_hz = parse_double(key, value);
    else if (key == "registration.duration_s") registration_duration_s = parse_double(key, value);
    else if (key == "registration.min_samples")
      registration_settings.min_samples = static_cast<int>(parse_u64(key, value));
    else
      throw ConfigError("unknown config key: '" + key + "'");
  }

  if (redundancy.repeat_count < 1)
    throw ConfigError("events.repeat_count must be >= 1");
  if (horizon_s <= 0.0) throw ConfigError("trial.horizon_s must be > 0");
  if (transport.loss_rate < 0.0 || transport.loss_rate > 1.0)
    throw ConfigError("transport.loss_rate must be in [0, 1]");
  if (volume.width_m <= 0.0 || volume.height_m <= 0.0 || volume.depth_m <= 0.0)
    throw ConfigError("volume extents must be > 0");
  if (force_threshold_n < 0.0)
    throw ConfigError("contact.force_threshold_n must be > 0 (or 0 for the "
                      "per-kind default)");
  if (contact.stiffness_n_per_m <= 0.0 || contact.contact_radius_m <= 0.0)
    throw ConfigError("contact stiffness and radius must be > 0");
  if (plant_max_speed_mps <= 0.0 || plant_max_accel_mps2 <= 0.0 ||
      retreat_speed_mps <= 0.0 || retreat_accel_mps2 <= 0.0)
    throw ConfigError("plant limits must be > 0");
  if (avatar.approach_duration_s <= 0.0 || avatar.arm_raise_duration_s <= 0.0)
    throw ConfigError("avatar durations must be > 0");
  if (workspace_radius_m <= 0.0 || zone_half_x_m <= 0.0 || zone_half_y_m <= 0.0)
    throw ConfigError("safety extents must be > 0");
  if (tracking.sample_rate_hz <= 0.0 || tracking.latency_ms < 0.0 ||
      tracking.noise_sigma_m < 0.0 || tracking.dropout_rate < 0.0 ||
      tracking.dropout_rate > 1.0)
    throw ConfigError("tracking: rate > 0, latency/noise >= 0, dropout in [0, 1]");
  if (registration_noise.gaussian_sigma_m < 0.0 ||
      registration_noise.gaussian_sigma_rot_rad < 0.0 ||
      registration_noise.outlier_rate < 0.0 ||
      registration_noise.outlier_rate > 1.0 ||
      registration_noise.outlier_offset_m < 0.0)
    throw ConfigError("registration: sigmas/offset >= 0, outlier_rate in [0, 1]");
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (kv.count(key))
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" +
                        key + "'");
    kv[key] = value;
  }
  return kv;
}

std::map<std::string, std::string> load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

void print_schema(std::ostream& os) {
  const Scenario d;
  os << "# Scenario configuration schema (defaults shown). Lines are\n"
        "# 'section.key = value'; '#' starts a comment; vectors are three\n"
        "# space-separated numbers (metres, board frame).\n"
        "trial.kind = handover            # handover|fistbump|highfive\n"
        "trial.strategy = static          # static|dynamic\n"
        "trial.seed = 1\n"
        "trial.horizon_s = 20\n"
        "geometry.robot_base = 0 0 1\n"
        "geometry.prop_ready = 0.45 0 1\n"
        "geometry.prop_park = 0.05 -0.4 1\n"
        "geometry.retreat = 0.05 -0.4 1\n"
        "volume.width_m = 0.10            # cross-section along prop-local y\n"
        "volume.height_m = 0.30           # cross-section along prop-local z\n"
        "volume.depth_m = 0.30            # forward along prop-local +x\n"
        "contact.stiffness_n_per_m = 2000\n"
        "contact.radius_m = 0.05\n"
        "contact.force_threshold_n = 0    # 0 -> per-kind default (7.5/15/15)\n"
        "plant.max_speed_mps = 1\n"
        "plant.max_accel_mps2 = 5\n"
        "plant.retreat_speed_mps = 0.8\n"
        "plant.retreat_accel_mps2 = 0.5\n"
        "avatar.approach_s = 3\n"
        "avatar.arm_raise_s = 1.2\n"
        "safety.workspace_radius_m = 0.8\n"
        "safety.zone_center = 1.4 0 0\n"
        "safety.zone_half_x_m = 0.3\n"
        "safety.zone_half_y_m = 0.3\n"
        "head.start = 2.2 0.8 1.7\n"
        "head.mark = 1.4 0 1.7\n"
        "head.walk_duration_s = 2\n"
        "head.mark_radius_m = 0.15\n"
        "head.intrusion_at_s = -1         # >=0 enables a workspace excursion\n"
        "head.intrusion_duration_s = 1.5\n"
        "head.zone_exit_at_s = -1         # >=0 enables a safe-zone exit\n"
        "head.zone_exit_duration_s = 2\n"
        "hand.rest = 0.8 -0.09 0.96\n"
        "hand.peak_speed_mps = 0          # 0 -> 0.6 handover, 1.0 otherwise\n"
        "hand.overshoot_m = -1            # <0 -> 0.10\n"
        "hand.jitter_sigma_m = 0.002\n"
        "hand.reaction_delay_s = 0.3\n"
        "hand.stationary = false\n"
        "tracking.sample_rate_hz = 90\n"
        "tracking.latency_ms = 30\n"
        "tracking.noise_sigma_m = 0.002\n"
        "tracking.dropout_rate = 0\n"
        "transport.loss_rate = 0\n"
        "transport.latency_us = 0\n"
        "transport.jitter_us = 0\n"
        "events.repeat_count = 5\n"
        "estop.at_s = -1                  # >=0 asserts operator stop\n"
        "estop.reset_at_s = -1\n"
        "registration.sigma_m = " << d.registration_noise.gaussian_sigma_m << "\n"
     << "registration.sigma_rot_rad = " << d.registration_noise.gaussian_sigma_rot_rad << "\n"
     << "registration.outlier_rate = " << d.registration_noise.outlier_rate << "\n"
     << "registration.outlier_offset_m = " << d.registration_noise.outlier_offset_m << "\n"
     << "registration.bias_m = 0 0 0\n"
        "registration.rate_hz = 90\n"
        "registration.duration_s = 5\n"
        "registration.min_samples = 30\n";
}

}  // namespace ethd

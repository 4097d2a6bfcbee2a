#include <doctest.h>

#include <sstream>

#include "ethd/scenario.hpp"

using namespace ethd;

TEST_CASE("config parser: keys, comments, vectors") {
  const std::string text =
      "# a comment\n"
      "trial.kind = fistbump\n"
      "trial.strategy = dynamic   # trailing comment\n"
      "tracking.latency_ms = 45\n"
      "geometry.prop_ready = 0.5 0 1.1\n"
      "\n";
  Scenario s = Scenario::defaults(InteractionKind::Handover, Strategy::Static);
  s.apply(parse_config_text(text));
  CHECK(s.kind == InteractionKind::FistBump);
  CHECK(s.strategy == Strategy::Dynamic);
  CHECK(s.tracking.latency_ms == 45.0);
  CHECK(s.prop_ready == Vec3{0.5, 0.0, 1.1});
}

TEST_CASE("config parser: malformed input is rejected with line info") {
  CHECK_THROWS_WITH_AS(parse_config_text("just words\n"),
                       doctest::Contains("line 1"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("a.b = 1\na.b = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("= 3\n"), ConfigError);
}

TEST_CASE("config: unknown keys and bad values are errors") {
  Scenario s;
  CHECK_THROWS_WITH_AS(s.apply({{"bogus.key", "1"}}),
                       doctest::Contains("unknown config key"), ConfigError);
  CHECK_THROWS_AS(s.apply({{"tracking.latency_ms", "fast"}}), ConfigError);
  CHECK_THROWS_AS(s.apply({{"geometry.prop_ready", "1 2"}}), ConfigError);
  CHECK_THROWS_AS(s.apply({{"geometry.prop_ready", "1 2 3 4"}}), ConfigError);
  CHECK_THROWS_AS(s.apply({{"events.repeat_count", "0"}}), ConfigError);
  CHECK_THROWS_AS(s.apply({{"transport.loss_rate", "1.5"}}), ConfigError);
  CHECK_THROWS_AS(s.apply({{"hand.stationary", "maybe"}}), ConfigError);
  CHECK_THROWS_AS(s.apply({{"volume.depth_m", "0"}}), ConfigError);
  CHECK_THROWS_AS(s.apply({{"contact.force_threshold_n", "-1"}}), ConfigError);
  CHECK_THROWS_AS(s.apply({{"tracking.dropout_rate", "2"}}), ConfigError);
  CHECK_THROWS_AS(s.apply({{"plant.max_speed_mps", "0"}}), ConfigError);
}

TEST_CASE("config: kind and strategy names") {
  CHECK(parse_kind("handover") == InteractionKind::Handover);
  CHECK(parse_kind("fist-bump") == InteractionKind::FistBump);
  CHECK(parse_strategy("static") == Strategy::Static);
  CHECK_THROWS_AS(parse_kind("wave"), ConfigError);
  CHECK_THROWS_AS(parse_strategy("hybrid"), ConfigError);
}

TEST_CASE("scenario: per-kind force thresholds and reach defaults") {
  Scenario handover = Scenario::defaults(InteractionKind::Handover, Strategy::Static);
  CHECK(handover.resolved_force_threshold() == 7.5);
  CHECK(handover.resolved_peak_speed() == 0.6);

  Scenario bump = Scenario::defaults(InteractionKind::FistBump, Strategy::Dynamic);
  CHECK(bump.resolved_force_threshold() == 15.0);
  CHECK(bump.resolved_peak_speed() == 1.0);

  bump.force_threshold_n = 9.0;
  CHECK(bump.resolved_force_threshold() == 9.0);
}

TEST_CASE("scenario: schema text round-trips through the parser") {
  std::ostringstream os;
  print_schema(os);
  Scenario s;
  // Every documented key must parse and be accepted.
  s.apply(parse_config_text(os.str()));
  CHECK(s.tracking.latency_ms == 30.0);
  CHECK(s.redundancy.repeat_count == 5);
}

TEST_CASE("scenario: head script includes scripted excursions") {
  Scenario s;
  s.intrusion_at_s = 5.0;
  const HeadScript script = s.head_script();
  // Mid-excursion the head reaches the workspace centre (at head height).
  const Vec3 inside = script.eval(to_micros(5.0 + 0.5 * s.intrusion_duration_s));
  CHECK(distance({inside.x, inside.y, 0}, {s.robot_base.x, s.robot_base.y, 0}) <
        1e-9);
  // Before and after, the head is at the mark.
  CHECK(distance(script.eval(to_micros(4.9)), s.head_mark) < 1e-9);
  CHECK(distance(script.eval(to_micros(5.0 + s.intrusion_duration_s + 0.1)),
                 s.head_mark) < 1e-9);
}

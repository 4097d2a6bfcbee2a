#include <doctest.h>

#include <cmath>

#include "ethd/controller.hpp"
#include "ethd/rng.hpp"

using namespace ethd;

TEST_CASE("blend weight: endpoints exact, cap at one second") {
  CHECK(blend_weight(0.0) == 0.0);
  CHECK(blend_weight(1.0) == 1.0);
  CHECK(blend_weight(2.0) == 1.0);  // capped
  CHECK_THROWS_AS(blend_weight(-0.1), std::invalid_argument);
}

TEST_CASE("blend weight: midpoint value against independent evaluation") {
  // Independent route: expm1 form of the same exponential blend.
  const double oracle = std::expm1(3.0 * 0.5) / std::expm1(3.0);
  CHECK(blend_weight(0.5) == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(std::abs(blend_weight(0.5) - 0.18243) < 1e-4);
}

TEST_CASE("blend weight: continuous and strictly increasing below the cap") {
  double prev = blend_weight(0.0);
  for (int i = 1; i <= 1000; ++i) {
    const double w = blend_weight(i / 1000.0);
    CHECK(w > prev);
    CHECK(w - prev < 0.004);  // no jumps at millisecond resolution
    prev = w;
  }
  CHECK(blend_weight(1.001) == 1.0);
}

TEST_CASE("mid trajectory: endpoints and midpoint symmetry") {
  MidTrajectory traj;
  traj.start = {0.1, 0.2, 0.3};
  traj.goal = {0.4, 0.2, 0.5};
  CHECK(mid_trajectory_point(traj, 0.0) == traj.start);
  CHECK(mid_trajectory_point(traj, 1.0) == traj.goal);
  CHECK(mid_trajectory_point(traj, 5.0) == traj.goal);  // clamped

  const Vec3 mid = mid_trajectory_point(traj, 0.5);
  const Vec3 expect = (traj.start + traj.goal) * 0.5;
  CHECK(distance(mid, expect) < 1e-12);
}

TEST_CASE("dynamic target: trigger point, hand convergence, blend value") {
  MidTrajectory traj;
  traj.start = {0.0, 0.0, 0.0};
  traj.goal = {0.3, 0.0, 0.0};  // x_midTraj(0.5) = 0.15

  const Vec3 hand{0.30, 0.0, 0.0};
  CHECK(dynamic_target(traj, hand, 0.0) == traj.start);

  // For t >= 1 s the target is the hand, exactly.
  CHECK(dynamic_target(traj, hand, 1.0) == hand);
  CHECK(dynamic_target(traj, hand, 3.7) == hand);

  // Frozen from the weight oracle: 0.15 + w(0.5) * 0.15.
  const Vec3 blended = dynamic_target(traj, hand, 0.5);
  CHECK(std::abs(blended.x - 0.17736) < 1e-4);
  CHECK(blended.y == 0.0);
}

TEST_CASE("interaction volume: boundaries") {
  VolumeSpec vol;  // 0.10 x 0.30 cross-section, 0.30 deep
  Pose prop;
  prop.position = {0.45, 0.0, 1.0};

  CHECK(volume_contains(vol, prop, prop.position));  // inclusive at 0 depth
  CHECK(volume_contains(vol, prop, {0.75, 0.0, 1.0}));
  CHECK_FALSE(volume_contains(vol, prop, {0.76, 0.0, 1.0}));   // 0.31 forward
  CHECK_FALSE(volume_contains(vol, prop, {0.44, 0.0, 1.0}));   // behind
  CHECK_FALSE(volume_contains(vol, prop, {0.55, 0.06, 1.0}));  // past half-width
  CHECK(volume_contains(vol, prop, {0.55, 0.05, 1.0}));
  CHECK(volume_contains(vol, prop, {0.55, 0.0, 1.15}));
  CHECK_FALSE(volume_contains(vol, prop, {0.55, 0.0, 1.16}));

  // The volume follows the prop orientation: rotate 90 deg about z and the
  // outward axis becomes +y.
  prop.orientation = Quat::from_axis_angle({0, 0, 1}, 3.14159265358979323846 / 2);
  CHECK(volume_contains(vol, prop, {0.45, 0.2, 1.0}));
  CHECK_FALSE(volume_contains(vol, prop, {0.65, 0.0, 1.0}));
}

TEST_CASE("plant: hold, one-tick reach, exact landing") {
  EndEffectorPlant plant({0.0, 0.0, 0.0});

  SUBCASE("target == position stays put bitwise") {
    plant.step({0.0, 0.0, 0.0});
    CHECK(plant.position() == Vec3{0.0, 0.0, 0.0});
    CHECK(plant.velocity() == Vec3{0.0, 0.0, 0.0});
  }

  SUBCASE("one-tick reach with generous limits") {
    plant.max_speed_mps = 10.0;
    plant.max_accel_mps2 = 1e4;
    plant.step({0.001, 0.0, 0.0});
    CHECK(plant.position() == Vec3{0.001, 0.0, 0.0});
  }

  SUBCASE("reaches and holds the target exactly once") {
    const Vec3 target{0.05, -0.02, 0.01};
    int landed_at = -1;
    for (int tick = 0; tick < 2000; ++tick) {
      plant.step(target);
      if (landed_at < 0 && plant.position() == target) landed_at = tick;
      if (landed_at >= 0) CHECK(plant.position() == target);  // holds exactly
    }
    CHECK(landed_at > 0);
  }
}

TEST_CASE("plant: trapezoidal arrival times against the closed-form oracle") {
  // Oracle: distance/v_max + v_max/a of accel+decel overhead, within the
  // discrete controller's margin.
  auto arrival_time = [](double dist) {
    EndEffectorPlant plant({0, 0, 0});
    const Vec3 target{dist, 0, 0};
    for (int tick = 1; tick <= 5000; ++tick) {
      plant.step(target);
      if (plant.at(target)) return tick * 1e-3;
    }
    return 1e9;
  };

  const double t1 = arrival_time(1.0);
  CHECK(t1 >= 1.0);
  CHECK(t1 <= 1.3);  // oracle: 1.0 + 1.0/5 = 1.2 plus discretization

  const double t04 = arrival_time(0.4);
  CHECK(t04 >= 0.4);
  CHECK(t04 <= 0.7);  // oracle: 0.4 + 0.2 = 0.6
}

TEST_CASE("plant: speed and acceleration limits hold on every tick") {
  Rng rng(21);
  EndEffectorPlant plant({0, 0, 0});
  const double dt = 1e-3;
  Vec3 prev_pos = plant.position();
  Vec3 prev_disp{};
  Vec3 target{0.3, -0.2, 0.4};
  for (int tick = 0; tick < 5000; ++tick) {
    if (tick % 700 == 350) {
      target = {rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5),
                rng.uniform(-0.5, 0.5)};
    }
    plant.step(target, dt);
    const Vec3 disp = plant.position() - prev_pos;
    CHECK(disp.norm() <= plant.max_speed_mps * dt + 1e-9);
    CHECK((disp - prev_disp).norm() <= plant.max_accel_mps2 * dt * dt + 1e-9);
    prev_disp = disp;
    prev_pos = plant.position();
  }
}

TEST_CASE("contact force: spring law and thresholds") {
  ContactModel model;  // 2000 N/m, 50 mm radius
  const Vec3 prop{0, 0, 0};

  CHECK(contact_force(prop, {0.051, 0, 0}, model) == 0.0);
  CHECK(contact_force(prop, {0.050, 0, 0}, model) == 0.0);
  CHECK(contact_force(prop, {0.045, 0, 0}, model) ==
        doctest::Approx(10.0).epsilon(1e-9));  // 5 mm penetration
  CHECK(contact_force(prop, {0.0425, 0, 0}, model) ==
        doctest::Approx(15.0).epsilon(1e-9));  // 7.5 mm -> fist-bump threshold

  InteractionConfig handover;
  handover.kind = InteractionKind::Handover;
  handover.force_threshold_n = default_force_threshold(InteractionKind::Handover);
  CHECK(handover.force_threshold_n == 7.5);
  CHECK_FALSE(detect_contact(7.4, handover));
  CHECK(detect_contact(7.6, handover));

  InteractionConfig bump;
  bump.kind = InteractionKind::FistBump;
  bump.force_threshold_n = default_force_threshold(InteractionKind::FistBump);
  CHECK_FALSE(detect_contact(15.0, bump));  // strict inequality at the threshold

  // Monotone in force for a fixed config.
  bool prev = false;
  for (double f = 0.0; f < 40.0; f += 0.5) {
    const bool now = detect_contact(f, bump);
    CHECK((now || !prev));
    prev = now;
  }
}

TEST_CASE("retreat: immediate completion and bounded travel time") {
  EndEffectorPlant plant({0.2, 0.0, 1.0});
  const Vec3 retreat_to = plant.position();
  CHECK(plant.at(retreat_to));  // already there: done without motion

  const Vec3 away{0.6, 0.0, 1.0};
  int ticks = 0;
  while (!plant.at(away) && ticks < 2000) {
    plant.step(away);
    ++ticks;
  }
  CHECK(ticks * 1e-3 <= 0.7);  // 0.4 m at 1 m/s, trapezoid oracle
}

TEST_CASE("interaction controller: static holds, dynamic triggers and blends") {
  InteractionConfig cfg;
  cfg.strategy = Strategy::Static;
  cfg.ready_pose.position = {0.45, 0.0, 1.0};

  InteractionController holder(cfg);
  auto out = holder.step(0, Vec3{0.5, 0, 1.0}, cfg.ready_pose.position);
  CHECK(out.target == cfg.ready_pose.position);
  CHECK_FALSE(out.blending);

  cfg.strategy = Strategy::Dynamic;
  InteractionController ctrl(cfg);

  // Hand far outside the volume: armed, no trigger.
  out = ctrl.step(0, Vec3{1.5, 0, 1.0}, cfg.ready_pose.position);
  CHECK(out.target == cfg.ready_pose.position);
  CHECK_FALSE(ctrl.trajectory());

  // Hand enters: the mid trajectory starts where the prop is and aims at the
  // midpoint of prop and hand.
  const Vec3 hand{0.65, 0.0, 1.0};
  out = ctrl.step(1'000'000, hand, cfg.ready_pose.position);
  REQUIRE(ctrl.trajectory());
  CHECK(ctrl.trajectory()->start == cfg.ready_pose.position);
  CHECK(distance(ctrl.trajectory()->goal, {0.55, 0.0, 1.0}) < 1e-12);
  CHECK(out.blending);
  CHECK(out.target == cfg.ready_pose.position);  // w(0) = 0

  // One second later the target is the (latest) hand exactly.
  out = ctrl.step(2'000'000, hand, Vec3{0.5, 0, 1.0});
  CHECK(out.target == hand);
  CHECK(out.weight == 1.0);

  // A dropout holds the last estimate rather than jumping.
  out = ctrl.step(2'100'000, std::nullopt, Vec3{0.5, 0, 1.0});
  CHECK(out.target == hand);
}

#include <doctest.h>

#include "ethd/geometry.hpp"
#include "ethd/rng.hpp"

using namespace ethd;

namespace {

Transform random_transform(Rng& rng, FrameId from, FrameId to) {
  Transform t;
  t.rotation = Quat::from_axis_angle(rng.unit_vector(), rng.uniform(-3.0, 3.0));
  t.translation = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
  t.from_frame = from;
  t.to_frame = to;
  return t;
}

}  // namespace

TEST_CASE("apply: identity, translation, rotation") {
  const Transform id = Transform::identity(FrameId::Board);
  CHECK(apply(id, {1, 2, 3}) == Vec3{1, 2, 3});

  Transform shift = Transform::identity(FrameId::Board);
  shift.translation = {0.1, 0, 0};
  CHECK(apply(shift, {0, 0, 0}) == Vec3{0.1, 0, 0});

  Transform rot180 = Transform::identity(FrameId::Board);
  rot180.rotation = Quat::from_axis_angle({0, 0, 1}, 3.14159265358979323846);
  const Vec3 r = apply(rot180, {1, 0, 0});
  CHECK(r.x == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::abs(r.y) < 1e-12);
}

TEST_CASE("compose: identity, inverse, quarter turns") {
  Rng rng(7);
  const Transform t = random_transform(rng, FrameId::Board, FrameId::Headset);

  const Transform via_id = compose(t, Transform::identity(FrameId::Board));
  const Vec3 p{0.3, -0.2, 0.9};
  CHECK(distance(apply(via_id, p), apply(t, p)) < 1e-12);

  const Transform round = compose(t, inverse(t));
  CHECK(distance(apply(round, p), p) < 1e-9);
  CHECK(quat_angle(round.rotation, Quat::identity()) < 1e-9);

  Transform q1 = Transform::identity(FrameId::Board);
  q1.rotation = Quat::from_axis_angle({0, 0, 1}, 3.14159265358979323846 / 2);
  const Transform half = compose(q1, q1);
  const Vec3 flipped = apply(half, {1, 0, 0});
  CHECK(flipped.x == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::abs(flipped.y) < 1e-12);
}

TEST_CASE("compose: frame mismatch is rejected") {
  const Transform a = Transform::identity(FrameId::Board);
  Transform b = Transform::identity(FrameId::Headset);
  CHECK_THROWS_AS(compose(a, b), FrameMismatch);
}

TEST_CASE("property: composition associativity and action consistency") {
  Rng rng(42);
  for (int i = 0; i < 200; ++i) {
    const Transform a = random_transform(rng, FrameId::Headset, FrameId::World);
    const Transform b = random_transform(rng, FrameId::Board, FrameId::Headset);
    const Transform c = random_transform(rng, FrameId::RobotBase, FrameId::Board);
    const Vec3 p{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};

    const Vec3 lhs = apply(compose(compose(a, b), c), p);
    const Vec3 rhs = apply(compose(a, compose(b, c)), p);
    CHECK(distance(lhs, rhs) < 1e-9);

    CHECK(distance(apply(compose(a, b), p), apply(a, apply(b, p))) < 1e-9);
  }
}

TEST_CASE("property: normalization preserves rotation action") {
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    Quat q = Quat::from_axis_angle(rng.unit_vector(), rng.uniform(-3, 3));
    // Perturb away from unit norm, renormalize, compare action.
    Quat scaled{q.w * 1.37, q.x * 1.37, q.y * 1.37, q.z * 1.37};
    const Quat n = scaled.normalized();
    CHECK(std::abs(n.norm() - 1.0) < 1e-9);
    const Vec3 p{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    CHECK(distance(n.rotate(p), q.rotate(p)) < 1e-9);
  }
}

TEST_CASE("min-jerk profile endpoints and symmetry") {
  CHECK(min_jerk_s(0.0) == 0.0);
  CHECK(min_jerk_s(1.0) == 1.0);
  CHECK(min_jerk_s(0.5) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(min_jerk_s(-0.5) == 0.0);
  CHECK(min_jerk_s(2.0) == 1.0);
  CHECK(min_jerk_sdot(0.5) == doctest::Approx(1.875).epsilon(1e-12));
}

TEST_CASE("sim clock is monotone and explicit") {
  SimClock clock;
  CHECK(clock.now() == 0);
  clock.advance(1000);
  CHECK(clock.now() == 1000);
  clock.advance_to(1000);  // no-op is fine
  CHECK_THROWS_AS(clock.advance_to(999), std::logic_error);
}

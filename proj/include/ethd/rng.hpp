// Deterministic random utilities. All randomness in the simulator flows
// through mt19937_64 plus hand-rolled distributions so that a fixed seed
// reproduces bit-identical streams on every platform (the standard pins the
// engine but not the library distributions).

#ifndef ETHD_RNG_HPP
#define ETHD_RNG_HPP

#include <cstdint>
#include <random>

#include "ethd/geometry.hpp"

namespace ethd {

// splitmix64, used for seed derivation only.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stable sub-seed for a named component of a seeded run.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(base ^ splitmix64(stream + 0x51ed2701));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  // Standard normal via Box-Muller (trigonometric form, cached pair).
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  Vec3 gaussian_vec3(double sigma) {
    return {sigma * gaussian(), sigma * gaussian(), sigma * gaussian()};
  }

  // Uniformly distributed unit direction.
  Vec3 unit_vector() {
    const double z = uniform(-1.0, 1.0);
    const double a = uniform(0.0, 2.0 * 3.14159265358979323846);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(a), r * std::sin(a), z};
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Stateless 3-component Gaussian keyed by (seed, index); used for per-tick
// jitter where evaluation order must not matter. splitmix64-based so an
// evaluation costs a handful of multiplies, not an engine seeding.
inline Vec3 keyed_gaussian_vec3(std::uint64_t seed, std::uint64_t index,
                                double sigma) {
  std::uint64_t s = derive_seed(seed, index);
  auto next01 = [&s] {
    s = splitmix64(s);
    return static_cast<double>(s >> 11) * 0x1.0p-53;
  };
  constexpr double kTwoPi = 2.0 * 3.14159265358979323846;
  const double r1 = std::sqrt(-2.0 * std::log(1.0 - next01()));
  const double a1 = kTwoPi * next01();
  const double r2 = std::sqrt(-2.0 * std::log(1.0 - next01()));
  const double a2 = kTwoPi * next01();
  return {sigma * r1 * std::cos(a1), sigma * r1 * std::sin(a1),
          sigma * r2 * std::cos(a2)};
}

}  // namespace ethd

#endif  // ETHD_RNG_HPP

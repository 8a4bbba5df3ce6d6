// Shared helpers for the test binaries: a tiny deterministic RNG (fixed
// algorithm, so frozen expectations survive toolchain changes), random
// rotations/unitaries built from it, and independent oracles (matrix
// exponential, finite differences) that do not share code with the library
// paths under test.
#pragma once

#include "qlyap/lyapunov.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <cstdint>

namespace qlyap::testing {

// xorshift64*; value stream is part of the frozen test fixtures.
class TinyRng {
 public:
  explicit TinyRng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  std::uint64_t next_u64() {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545f4914f6cdd1dull;
  }

  // uniform on [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform on [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

inline Vec3 random_unit_vector(TinyRng& rng) {
  // rejection-free: z uniform on [-1,1], azimuth uniform
  const double z = rng.uniform(-1.0, 1.0);
  const double phi = rng.uniform(0.0, 2.0 * M_PI);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return Vec3(r * std::cos(phi), r * std::sin(phi), z);
}

// Rodrigues form; independent of the library's generators.
inline Mat3 rotation(double angle, const Vec3& axis) {
  Mat3 k;
  k << 0, -axis.z(), axis.y(), axis.z(), 0, -axis.x(), -axis.y(), axis.x(), 0;
  return Mat3::Identity() + std::sin(angle) * k + (1.0 - std::cos(angle)) * k * k;
}

inline Mat3 random_rotation(TinyRng& rng) {
  return rotation(rng.uniform(0.0, M_PI), random_unit_vector(rng));
}

// Haar-ish random SU(2) via a random unit quaternion.
inline Mat2c random_unitary2(TinyRng& rng) {
  double q[4];
  double norm = 0.0;
  for (double& c : q) {
    c = rng.uniform(-1.0, 1.0);
    norm += c * c;
  }
  norm = std::sqrt(norm);
  for (double& c : q) c /= norm;
  const std::complex<double> i(0, 1);
  Mat2c u;
  u << q[0] + i * q[3], q[2] + i * q[1], -q[2] + i * q[1], q[0] - i * q[3];
  return u;
}

inline Mat3 expm(const Mat3& g) { return g.exp(); }

// dV/dt at U along dU/dt = G U, by central differences of the functional.
inline double fd_vdot(const Mat3& u, const Mat3& u_f, const Mat3& g, double h) {
  const Mat3 up = expm(h * g) * u;
  const Mat3 um = expm(-h * g) * u;
  return (compute_context(up, u_f).v - compute_context(um, u_f).v) / (2.0 * h);
}

}  // namespace qlyap::testing

// Seeded sampling of states, unitaries and rotations.
//
// One generator type (std::mt19937_64). Work item i of a run with base seed s
// draws from sub_rng(s, i), so results do not depend on how items are
// scheduled across threads.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "qwasser/states.hpp"

namespace qwasser {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline Rng sub_rng(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(splitmix64(seed) ^ (index + 1) * 0xd1b54a32d192ed03ULL));
}

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Eigen::Vector3d random_unit_vector(Rng& rng) {
  std::normal_distribution<double> n;
  Eigen::Vector3d v;
  do {
    v = {n(rng), n(rng), n(rng)};
  } while (v.norm() < 1e-12);
  return v.normalized();
}

/// Uniform in the unit ball (radius by cube-root transform).
inline QubitState random_mixed_state(Rng& rng) {
  const double r = std::cbrt(uniform(rng));
  return state_from_bloch(BlochVector::from(r * random_unit_vector(rng)));
}

inline QubitState random_pure_state(Rng& rng) {
  return state_from_bloch(BlochVector::from(random_unit_vector(rng)));
}

/// Haar-distributed 2x2 unitary (QR of a complex Ginibre matrix, phases fixed).
inline Mat2 random_unitary(Rng& rng) {
  std::normal_distribution<double> n;
  Mat2 g;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) g(i, j) = Complex(n(rng), n(rng));
  Eigen::HouseholderQR<Mat2> qr(g);
  Mat2 q = qr.householderQ();
  const Mat2 r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < 2; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

/// Uniform rotation in SO(3).
inline Eigen::Matrix3d random_rotation(Rng& rng) {
  std::normal_distribution<double> n;
  Eigen::Vector4d q;
  do {
    for (int k = 0; k < 4; ++k) q(k) = n(rng);
  } while (q.norm() < 1e-12);
  q.normalize();
  return Eigen::Quaterniond(q(0), q(1), q(2), q(3)).toRotationMatrix();
}

/// Poles of every axis and the center.
inline std::vector<QubitState> deterministic_panel() {
  return {named::plus_z(),  named::minus_z(), named::plus_x(),         named::minus_x(),
          named::plus_y(),  named::minus_y(), named::maximally_mixed()};
}

}  // namespace qwasser

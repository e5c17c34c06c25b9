// Random families of state maps for the D_z characterization harness.
//
// Each family is either fully inside the characterized class (|b| kept, b3
// kept or globally negated) or, for the adversarial family, fully outside it.
#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "qwasser/isometry.hpp"

namespace qwasser::families {

namespace detail {

/// A random real function of the state, smooth or with jumps.
inline std::function<double(const QubitState&)> random_phase_function(Rng& rng, bool discontinuous) {
  const double a0 = uniform(rng, -3.0, 3.0), a1 = uniform(rng, -3.0, 3.0), a2 = uniform(rng, -3.0, 3.0);
  const double a3 = uniform(rng, -3.0, 3.0), a4 = uniform(rng, -3.0, 3.0), k = uniform(rng, 1.0, 8.0);
  if (!discontinuous) {
    return [=](const QubitState& rho) {
      const BlochVector b = rho.bloch();
      return a0 + a1 * b.x + a2 * b.y * b.z + a3 * std::sin(k * b.norm()) + a4 * b.x * b.x * b.y;
    };
  }
  const double threshold = uniform(rng, 0.2, 0.9);
  return [=](const QubitState& rho) {
    const BlochVector b = rho.bloch();
    double t = b.norm() > threshold ? a0 : a1;
    if (b.y > 0.0) t += a2;
    if (b.z < -0.3) t += a3 * b.x;
    return t;
  };
}

inline BlochVector rotate_xy(const BlochVector& b, double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  return {c * b.x - s * b.y, s * b.x + c * b.y, b.z};
}

inline const Mat2& sigma_x() {
  static const Mat2 m = pauli(1);
  return m;
}

}  // namespace detail

/// Constant rotations about the z axis.
inline MapFamily z_rotations() {
  return {"z_rotations", [](Rng& rng, int i) {
            return StateMap::unitary(z_phase(uniform(rng, 0.0, 2.0 * std::numbers::pi)),
                                     "z_rotation_" + std::to_string(i));
          }};
}

/// sigma_x conjugation composed with z rotations, complex conjugation or a
/// z phase field. All of these negate b3 or (with an even number of flips)
/// keep it.
inline MapFamily sigma_x_flip_composites() {
  return {"sigma_x_flip_composites", [](Rng& rng, int i) {
            const std::string id = "sx_flip_" + std::to_string(i);
            const StateMap flip = StateMap::unitary(detail::sigma_x(), "sx");
            switch (i % 3) {
              case 0:
                return compose(flip, StateMap::unitary(z_phase(uniform(rng, 0.0, 6.3)), "uz"), id);
              case 1:
                return compose(flip, StateMap::antiunitary(z_phase(uniform(rng, 0.0, 6.3)), "conj_uz"), id);
              default:
                return compose(flip, StateMap::z_phase_field(detail::random_phase_function(rng, i % 2 == 0)), id);
            }
          }};
}

/// rho -> U_z(t(rho)) rho U_z(t(rho))* with random, possibly discontinuous t.
inline MapFamily z_phase_fields() {
  return {"z_phase_fields", [](Rng& rng, int i) {
            return StateMap::z_phase_field(detail::random_phase_function(rng, i % 2 == 1),
                                           "z_phase_field_" + std::to_string(i));
          }};
}

/// Bloch maps b -> (R(phi(b)) (b1, b2), -b3): length kept, b3 negated.
inline MapFamily b3_negating_bloch_maps() {
  return {"b3_negating_bloch_maps", [](Rng& rng, int i) {
            auto phase = detail::random_phase_function(rng, i % 2 == 1);
            return StateMap::bloch(
                [phase](const BlochVector& b) {
                  BlochVector r = detail::rotate_xy(b, phase(state_from_bloch(b)));
                  r.z = -r.z;
                  return r;
                },
                "b3_negating_" + std::to_string(i));
          }};
}

/// Maps outside the characterized class: length-changing radial maps (also
/// behind a coordinate swap), rotations that move the z axis, b3 sign
/// flips that depend on the state, and uniform shrinking.
inline MapFamily adversarial() {
  return {"adversarial", [](Rng& rng, int i) {
            const std::string id = "adversarial_" + std::to_string(i);
            switch (i % 4) {
              case 0: {
                const double p = uniform(rng, 1.5, 3.0);
                return StateMap::bloch(
                    [p](const BlochVector& b) {
                      const double r = b.norm();
                      if (r == 0.0) return b;
                      const BlochVector swapped{b.y, b.x, b.z};
                      return (std::pow(r, p) / r) * swapped;
                    },
                    id + "_swap_radial");
              }
              case 1: {
                // axis at least ~0.45 rad off z, angle bounded away from 0
                Eigen::Vector3d axis = random_unit_vector(rng);
                axis.z() = std::clamp(axis.z(), -0.9, 0.9);
                axis.normalize();
                const double angle = uniform(rng, 0.3, std::numbers::pi);
                const Eigen::Matrix3d o = Eigen::AngleAxisd(angle, axis).toRotationMatrix();
                return StateMap::unitary(rotation_to_unitary(o), id + "_tilted_rotation");
              }
              case 2:
                return StateMap::bloch([](const BlochVector& b) { return BlochVector{b.x, b.y, std::abs(b.z)}; },
                                       id + "_abs_b3");
              default: {
                const double s = uniform(rng, 0.5, 0.9);
                const double phi = uniform(rng, 0.0, 6.3);
                return StateMap::bloch([s, phi](const BlochVector& b) { return s * detail::rotate_xy(b, phi); },
                                       id + "_shrink");
              }
            }
          }};
}

/// Haar-random unitary conjugations; generically outside the class.
inline MapFamily random_unitaries() {
  return {"random_unitaries", [](Rng& rng, int i) {
            return StateMap::unitary(random_unitary(rng), "haar_unitary_" + std::to_string(i));
          }};
}

/// Haar-random Wigner symmetries, alternating unitary and anti-unitary.
inline MapFamily random_wigner() {
  return {"random_wigner", [](Rng& rng, int i) {
            const Mat2 u = random_unitary(rng);
            return i % 2 == 0 ? StateMap::unitary(u, "wigner_u_" + std::to_string(i))
                              : StateMap::antiunitary(u, "wigner_a_" + std::to_string(i));
          }};
}

}  // namespace qwasser::families

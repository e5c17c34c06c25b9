// Qubit states, Bloch vectors and the Pauli basis.
#pragma once

#include <array>
#include <cmath>
#include <ostream>
#include <string>

#include "qwasser/linalg.hpp"

namespace qwasser {

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  static BlochVector from(const Eigen::Vector3d& v) { return {v.x(), v.y(), v.z()}; }
  Eigen::Vector3d vec() const { return {x, y, z}; }
  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  double dot(const BlochVector& o) const { return x * o.x + y * o.y + z * o.z; }

  friend BlochVector operator-(const BlochVector& a, const BlochVector& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend BlochVector operator*(double s, const BlochVector& b) { return {s * b.x, s * b.y, s * b.z}; }
  friend bool operator==(const BlochVector&, const BlochVector&) = default;
  friend std::ostream& operator<<(std::ostream& os, const BlochVector& b) {
    return os << '(' << b.x << ", " << b.y << ", " << b.z << ')';
  }
};

inline constexpr double kBlochClampTol = 1e-6;
inline constexpr double kDefaultPurityTol = 1e-8;

/// sigma_0 = I, sigma_1..3 = X, Y, Z.
inline Mat2 pauli(int j) {
  using namespace std::complex_literals;
  Mat2 m;
  switch (j) {
    case 0: m << 1.0, 0.0, 0.0, 1.0; break;
    case 1: m << 0.0, 1.0, 1.0, 0.0; break;
    case 2: m << 0.0, -1i, 1i, 0.0; break;
    case 3: m << 1.0, 0.0, 0.0, -1.0; break;
    default: throw ContractViolation("pauli: index " + std::to_string(j) + " outside 0..3");
  }
  return m;
}

inline BlochVector bloch_of_matrix(const Mat2& m) {
  // tr(sigma_j m) written out
  return {(m(0, 1) + m(1, 0)).real(), (Complex(0, 1) * (m(0, 1) - m(1, 0))).real(),
          (m(0, 0) - m(1, 1)).real()};
}

/// Density matrix of a qubit: Hermitian, unit trace, positive semidefinite.
class QubitState {
public:
  /// I/2
  QubitState() : m_(Mat2::Identity() / 2.0) {}

  static QubitState from_matrix(const Mat2& m) {
    if (!is_hermitian(m)) throw DomainError("state matrix is not Hermitian");
    if (std::abs(m.trace() - 1.0) > 1e-12) throw DomainError("state matrix does not have unit trace");
    // smallest eigenvalue is (1 - |b|)/2
    if (bloch_of_matrix(m).norm() > 1.0 + 2.0 * kPsdClampTol) {
      throw DomainError("state matrix is not positive semidefinite");
    }
    return QubitState((m + m.adjoint()) / 2.0);
  }

  const Mat2& matrix() const { return m_; }
  BlochVector bloch() const { return bloch_of_matrix(m_); }

private:
  explicit QubitState(const Mat2& m) : m_(m) {}
  friend QubitState state_from_bloch(const BlochVector& b);

  Mat2 m_;
};

/// rho = (I + x sigma_1 + y sigma_2 + z sigma_3) / 2. Vectors with norm up to
/// 1 + 1e-6 are pulled radially onto the sphere; anything longer is rejected.
inline QubitState state_from_bloch(const BlochVector& b) {
  BlochVector v = b;
  const double n = b.norm();
  if (!std::isfinite(n) || n > 1.0 + kBlochClampTol) {
    throw DomainError("Bloch vector of norm " + std::to_string(n) + " lies outside the unit ball");
  }
  if (n > 1.0) v = (1.0 / n) * b;
  return QubitState(0.5 * (pauli(0) + v.x * pauli(1) + v.y * pauli(2) + v.z * pauli(3)));
}

inline BlochVector bloch_from_state(const QubitState& rho) { return rho.bloch(); }

inline bool is_pure(const QubitState& rho, double tol = kDefaultPurityTol) {
  return std::abs(rho.bloch().norm() - 1.0) <= tol;
}

/// Distinguished states used throughout the tests and the CLI.
namespace named {
inline QubitState plus_z() { return state_from_bloch({0, 0, 1}); }
inline QubitState minus_z() { return state_from_bloch({0, 0, -1}); }
inline QubitState plus_x() { return state_from_bloch({1, 0, 0}); }
inline QubitState minus_x() { return state_from_bloch({-1, 0, 0}); }
inline QubitState plus_y() { return state_from_bloch({0, 1, 0}); }
inline QubitState minus_y() { return state_from_bloch({0, -1, 0}); }
inline QubitState maximally_mixed() { return QubitState{}; }
}  // namespace named

}  // namespace qwasser

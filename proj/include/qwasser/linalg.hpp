// Dense complex linear algebra at dimensions 2 and 4.
//
// Tensor convention (fixed for every 4x4 matrix in the library): row-major
// Kronecker product, result(2i+k, 2j+l) = a(i,j) * b(k,l). The first factor
// is the "H" slot and the second the "H*" slot of a coupling. The transpose
// of an operator acting on the dual space is the plain entrywise transpose in
// the computational basis.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "qwasser/errors.hpp"

namespace qwasser {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec4 = Eigen::Vector4cd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kPsdClampTol = 1e-10;

template <typename Derived>
double max_abs_entry(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().maxCoeff();
}

/// max_ij |m(i,j) - conj(m(j,i))|
template <typename Derived>
double hermiticity_error(const Eigen::MatrixBase<Derived>& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double tol = kHermitianTol) {
  return hermiticity_error(m) <= tol * std::max(1.0, max_abs_entry(m));
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& u, double tol = 1e-10) {
  using Plain = typename Derived::PlainObject;
  return max_abs_entry(u * u.adjoint() - Plain::Identity()) <= tol;
}

template <typename Derived>
void require_hermitian(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (!is_hermitian(m)) {
    throw ContractViolation(std::string(what) + ": matrix is not Hermitian (error " +
                            std::to_string(hermiticity_error(m)) + ")");
  }
}

template <typename Derived>
void require_unitary(const Eigen::MatrixBase<Derived>& u, const char* what) {
  if (!is_unitary(u)) throw ContractViolation(std::string(what) + ": operator is not unitary");
}

inline Mat4 tensor(const Mat2& a, const Mat2& b) {
  Mat4 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) r(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return r;
}

/// Entrywise transpose; no conjugation.
template <typename M>
M transpose_op(const M& a) {
  return a.transpose();
}

/// Traces out the second (H*) factor: result(i,j) = sum_k m(2i+k, 2j+k).
inline Mat2 partial_trace_second(const Mat4& m) {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r(i, j) = m(2 * i, 2 * j) + m(2 * i + 1, 2 * j + 1);
  return r;
}

/// Traces out the first (H) factor: result(k,l) = sum_i m(2i+k, 2i+l).
inline Mat2 partial_trace_first(const Mat4& m) {
  Mat2 r;
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) r(k, l) = m(k, l) + m(2 + k, 2 + l);
  return r;
}

template <int N>
struct HermitianEigen {
  Eigen::Matrix<double, N, 1> values;           // ascending
  Eigen::Matrix<Complex, N, N> vectors;         // orthonormal columns
};

template <typename Derived>
auto eig_hermitian(const Eigen::MatrixBase<Derived>& m) {
  constexpr int N = Derived::RowsAtCompileTime;
  static_assert(N == 2 || N == 4, "eig_hermitian is defined for 2x2 and 4x4 matrices");
  require_hermitian(m, "eig_hermitian");
  using Plain = Eigen::Matrix<Complex, N, N>;
  const Plain sym = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Plain> solver(sym);
  if (solver.info() != Eigen::Success) throw InternalError("eig_hermitian: eigensolver failed");
  return HermitianEigen<N>{solver.eigenvalues(), solver.eigenvectors()};
}

/// Principal square root of a 2x2 Hermitian PSD matrix.
///
/// Eigenvalues in [-1e-10, 0) are clamped to zero; eigenvalues at the
/// rounding-noise floor are treated as exact zeros so that the root of a
/// projection is the projection itself.
inline Mat2 sqrt_psd(const Mat2& m) {
  const auto eig = eig_hermitian(m);
  const double scale = std::max(1.0, std::abs(eig.values(1)));
  if (eig.values(0) < -kPsdClampTol * scale) {
    throw ContractViolation("sqrt_psd: matrix has a negative eigenvalue " +
                            std::to_string(eig.values(0)));
  }
  const double noise_floor = 8.0 * std::numeric_limits<double>::epsilon() * scale;
  Eigen::Vector2d roots;
  for (int i = 0; i < 2; ++i) roots(i) = eig.values(i) <= noise_floor ? 0.0 : std::sqrt(eig.values(i));
  Mat2 r = eig.vectors * roots.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
  return (r + r.adjoint()) / 2.0;
}

/// Row-major vectorization ||X>>, v(2i+j) = X(i,j). Consistent with tensor():
/// (A (x) B) vec(X) = vec(A X B^T).
inline Vec4 vec(const Mat2& x) {
  Vec4 v;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) v(2 * i + j) = x(i, j);
  return v;
}

/// <<X|| C ||X>>
inline double bra_cost_ket(const Mat2& x, const Mat4& c) {
  const Vec4 v = vec(x);
  return (v.adjoint() * c * v)(0, 0).real();
}

inline Complex trace_product(const Mat4& a, const Mat4& b) {
  // tr(AB) without forming the product
  return (a.transpose().cwiseProduct(b)).sum();
}

}  // namespace qwasser

// Quantum optimal transport between qubit states.
//
// A coupling of (rho, omega) is a density matrix Pi on H (x) H* with
// tr_{H*} Pi = omega and tr_H Pi = rho^T. The squared distance is the
// minimum of tr[Pi C] over couplings, a 9-dimensional semidefinite program:
// every coupling is omega (x) rho^T + sum_ij x_ij sigma_i (x) sigma_j, and the
// only remaining constraint is Pi >= 0.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "qwasser/cost.hpp"
#include "qwasser/states.hpp"

namespace qwasser {

class Coupling {
public:
  /// Validates PSD, unit trace and both marginals.
  Coupling(const Mat4& matrix, const QubitState& omega, const QubitState& rho, double tol = 1e-8)
      : matrix_((matrix + matrix.adjoint()) / 2.0),
        first_(omega),
        second_t_(transpose_op(rho.matrix())) {
    if (!is_hermitian(matrix)) throw ContractViolation("coupling matrix is not Hermitian");
    if (marginal_residual() > tol) {
      throw InternalError("coupling marginals violated by " + std::to_string(marginal_residual()));
    }
    if (min_eigenvalue() < -kPsdClampTol) throw InternalError("coupling matrix is not PSD");
  }

  const Mat4& matrix() const { return matrix_; }
  /// omega = tr_{H*} Pi
  const QubitState& first_marginal() const { return first_; }
  /// rho^T = tr_H Pi
  const Mat2& second_marginal_transposed() const { return second_t_; }

  double marginal_residual() const {
    return std::max(max_abs_entry(partial_trace_second(matrix_) - first_.matrix()),
                    max_abs_entry(partial_trace_first(matrix_) - second_t_));
  }
  double min_eigenvalue() const { return eig_hermitian(matrix_).values(0); }

private:
  Mat4 matrix_;
  QubitState first_;
  Mat2 second_t_;
};

enum class SolverStatus { closed_form, converged, max_iterations };

inline std::string_view to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::closed_form: return "closed_form";
    case SolverStatus::converged: return "converged";
    case SolverStatus::max_iterations: return "max_iterations";
  }
  return "unknown";
}

struct SolverConfig {
  double tolerance = 1e-8;  // certified duality gap
  int max_iterations = 500;  // Newton steps, summed over all centering rounds
  double barrier_initial = 1.0;
  double barrier_growth = 8.0;
  double newton_decrement_tol = 1e-11;
  double armijo = 0.25;
  double backtrack = 0.5;
  // Shortcut rho == omega through the canonical purification.
  bool self_distance_fast_path = true;

  void validate() const {
    if (!(tolerance > 0.0)) throw DomainError("solver tolerance must be positive");
    if (max_iterations < 1) throw DomainError("solver max_iterations must be at least 1");
    if (!(barrier_initial > 0.0) || !(barrier_growth > 1.0)) {
      throw DomainError("barrier schedule needs initial > 0 and growth > 1");
    }
    if (!(armijo > 0.0 && armijo < 0.5) || !(backtrack > 0.0 && backtrack < 1.0)) {
      throw DomainError("line search parameters out of range");
    }
  }
};

struct TransportResult {
  double optimal_value;
  Coupling optimal_coupling;
  SolverStatus status;
  // Certified duality gap (barrier path) or zero for closed forms.
  double duality_gap_or_residual;
  int iterations;
};

inline Coupling product_coupling(const QubitState& rho, const QubitState& omega) {
  return Coupling(tensor(omega.matrix(), transpose_op(rho.matrix())), omega, rho);
}

inline double coupling_cost(const Mat4& pi, const Mat4& c) {
  const Complex v = trace_product(pi, c);
  if (std::abs(v.imag()) > 1e-8) {
    throw InternalError("coupling cost has imaginary part " + std::to_string(v.imag()));
  }
  return v.real();
}

inline double coupling_cost(const Coupling& pi, const CostOperator& c) {
  return coupling_cost(pi.matrix(), c.matrix);
}

/// <<sqrt rho|| C ||sqrt rho>>, the cost of the canonical purification.
/// Evaluated as tr[vv* C] so that it agrees bit for bit with the cost of
/// purification_coupling().
inline double self_distance_sq(const QubitState& rho, const CostOperator& c) {
  const Vec4 v = vec(sqrt_psd(rho.matrix()));
  return std::max(0.0, coupling_cost(Mat4(v * v.adjoint()), c.matrix));
}

/// vec(sqrt rho) vec(sqrt rho)^*, a coupling of rho with itself.
inline Coupling purification_coupling(const QubitState& rho) {
  const Vec4 v = vec(sqrt_psd(rho.matrix()));
  return Coupling(v * v.adjoint(), rho, rho);
}

/// Purification cost in closed form, C_sym: 4 (1 - sqrt(1 - |b|^2)).
inline double self_distance_sym_closed_form(const BlochVector& b) {
  const double r2 = std::min(1.0, b.dot(b));
  return 4.0 * (1.0 - std::sqrt(1.0 - r2));
}

/// Purification cost in closed form, C_z: 2 (1 - sqrt(1 - |b|^2)) (1 - b3^2/|b|^2).
/// Undefined at the center; nullopt there.
inline std::optional<double> self_distance_z_closed_form(const BlochVector& b) {
  const double r2 = b.dot(b);
  if (r2 == 0.0) return std::nullopt;
  return 2.0 * (1.0 - std::sqrt(1.0 - std::min(1.0, r2))) * (1.0 - b.z * b.z / r2);
}

namespace detail {

inline const std::array<Mat4, 9>& traceless_product_basis() {
  static const std::array<Mat4, 9> basis = [] {
    std::array<Mat4, 9> b;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) b[3 * i + j] = tensor(pauli(i + 1), pauli(j + 1));
    return b;
  }();
  return basis;
}

struct BarrierPoint {
  Mat4 pi;
  Mat4 inverse;
  double log_det;
};

inline std::optional<BarrierPoint> barrier_point(const Mat4& pi0, const Eigen::Matrix<double, 9, 1>& x) {
  const auto& basis = traceless_product_basis();
  Mat4 pi = pi0;
  for (int k = 0; k < 9; ++k) pi += x(k) * basis[k];
  Eigen::LLT<Mat4> llt(pi);
  if (llt.info() != Eigen::Success) return std::nullopt;
  const Mat4 l = llt.matrixL();
  double log_det = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double d = l(i, i).real();
    if (!(d > 0.0)) return std::nullopt;
    log_det += 2.0 * std::log(d);
  }
  Mat4 inv = llt.solve(Mat4::Identity());
  return BarrierPoint{pi, (inv + inv.adjoint()) / 2.0, log_det};
}

struct Certificate {
  double dual_value;
  double gap;
};

/// Dual bound from a centered point. The Newton-corrected estimate
/// Z = (Pi^{-1} - Pi^{-1} dPi Pi^{-1}) / t already satisfies tr(Z B_k) = c_k;
/// the residual is projected out, then Z is shifted by a multiple of the
/// identity (orthogonal to every B_k) until Z >= 0. Any such Z gives
/// tr[Pi C] >= tr[Pi0 (C - Z)] for every coupling Pi.
inline Certificate certify(const Mat4& pi0, const Mat4& cost, const BarrierPoint& pt, const Mat4& newton_dpi,
                           double t) {
  const auto& basis = traceless_product_basis();
  Mat4 z = (pt.inverse - pt.inverse * newton_dpi * pt.inverse) / t;
  Mat4 correction = Mat4::Zero();
  for (int k = 0; k < 9; ++k) {
    const double ck = trace_product(basis[k], cost).real();
    const double zk = trace_product(basis[k], z).real();
    correction += ((ck - zk) / 4.0) * basis[k];
  }
  z += correction;
  z = (z + z.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Mat4> es(z, Eigen::EigenvaluesOnly);
  const double lowest = es.eigenvalues()(0);
  if (lowest < 0.0) z -= lowest * Mat4::Identity();
  const double dual = trace_product(pi0, cost - z).real();
  const double primal = trace_product(pt.pi, cost).real();
  return Certificate{dual, primal - dual};
}

struct BarrierOutcome {
  Mat4 pi;
  double value;
  double gap;
  int iterations;
  bool converged;
};

/// Log-det barrier path following over the 9 free coordinates. pi0 must be
/// strictly positive definite.
inline BarrierOutcome barrier_solve(const Mat4& pi0, const Mat4& cost, const SolverConfig& cfg) {
  using Vec9 = Eigen::Matrix<double, 9, 1>;
  using Mat9 = Eigen::Matrix<double, 9, 9>;
  const auto& basis = traceless_product_basis();
  constexpr double kMinStep = 1e-6;
  constexpr double kQuadraticRegion = 1e-6;

  Vec9 c;
  for (int k = 0; k < 9; ++k) c(k) = trace_product(basis[k], cost).real();

  Vec9 x = Vec9::Zero();
  auto pt = barrier_point(pi0, x);
  if (!pt) throw InternalError("barrier_solve: starting coupling is not positive definite");

  double t = cfg.barrier_initial;
  int iterations = 0;
  double best_gap = std::numeric_limits<double>::infinity();

  auto objective = [&](const BarrierPoint& p, const Vec9& xs) { return t * c.dot(xs) - p.log_det; };

  while (iterations < cfg.max_iterations) {
    // centering; the last Newton direction feeds the dual estimate
    Mat4 newton_dpi = Mat4::Zero();
    bool polished = false;
    while (iterations < cfg.max_iterations) {
      std::array<Mat4, 9> g;
      for (int k = 0; k < 9; ++k) g[k] = pt->inverse * basis[k];
      Vec9 grad;
      Mat9 hess;
      for (int k = 0; k < 9; ++k) {
        grad(k) = t * c(k) - g[k].trace().real();
        for (int l = 0; l <= k; ++l) {
          hess(k, l) = hess(l, k) = trace_product(g[k], g[l]).real();
        }
      }
      const Vec9 step = -hess.ldlt().solve(grad);
      const double decrement_sq = -grad.dot(step);
      newton_dpi.setZero();
      for (int k = 0; k < 9; ++k) newton_dpi += step(k) * basis[k];
      ++iterations;
      if (!std::isfinite(decrement_sq) || decrement_sq / 2.0 <= cfg.newton_decrement_tol || polished) break;

      // Inside the quadratic region the full step stays feasible and one step
      // reaches rounding level; Armijo tests there only compare noise.
      if (decrement_sq < kQuadraticRegion) {
        const Vec9 xs = x + step;
        auto trial = barrier_point(pi0, xs);
        if (!trial) break;
        x = xs;
        pt = std::move(trial);
        polished = true;
        continue;
      }

      const double f0 = objective(*pt, x);
      double s = 1.0;
      std::optional<BarrierPoint> trial;
      Vec9 xs;
      for (; s > kMinStep; s *= cfg.backtrack) {
        xs = x + s * step;
        trial = barrier_point(pi0, xs);
        if (trial && objective(*trial, xs) <= f0 - cfg.armijo * s * decrement_sq) break;
        trial.reset();
      }
      if (!trial) break;  // stalled at rounding level for this t
      x = xs;
      pt = std::move(trial);
    }

    const Certificate cert = certify(pi0, cost, *pt, newton_dpi, t);
    best_gap = std::min(best_gap, std::max(0.0, cert.gap));
    if (cert.gap <= cfg.tolerance) {
      return {pt->pi, trace_product(pt->pi, cost).real(), std::max(0.0, cert.gap), iterations, true};
    }
    t *= cfg.barrier_growth;
  }
  return {pt->pi, trace_product(pt->pi, cost).real(), best_gap, iterations, false};
}

inline bool same_state(const QubitState& a, const QubitState& b, double tol = 1e-12) {
  return max_abs_entry(a.matrix() - b.matrix()) <= tol;
}

}  // namespace detail

/// Minimizes tr[Pi C] over couplings of (rho, omega).
///
/// If either marginal is pure the coupling set is the single product
/// coupling. Otherwise a barrier method runs from the (strictly feasible)
/// product coupling; the result is never worse than the product coupling.
inline TransportResult solve_min_coupling(const QubitState& rho, const QubitState& omega,
                                          const CostOperator& c, const SolverConfig& cfg = {}) {
  cfg.validate();
  const Coupling product = product_coupling(rho, omega);
  const double product_cost = coupling_cost(product, c);

  if (cfg.self_distance_fast_path && detail::same_state(rho, omega)) {
    return {self_distance_sq(rho, c), purification_coupling(rho), SolverStatus::closed_form, 0.0, 0};
  }
  if (is_pure(rho) || is_pure(omega)) {
    return {std::max(0.0, product_cost), product, SolverStatus::closed_form, 0.0, 0};
  }

  const auto out = detail::barrier_solve(product.matrix(), c.matrix, cfg);
  const SolverStatus status = out.converged ? SolverStatus::converged : SolverStatus::max_iterations;
  if (out.value >= product_cost) {
    return {std::max(0.0, product_cost), product, status, out.gap, out.iterations};
  }
  double value = out.value;
  if (value < 0.0 && value > -cfg.tolerance) value = 0.0;
  return {value, Coupling(out.pi, omega, rho), status, out.gap, out.iterations};
}

inline double wasserstein_distance(const QubitState& rho, const QubitState& omega, const CostOperator& c,
                                   const SolverConfig& cfg = {}) {
  return std::sqrt(std::max(0.0, solve_min_coupling(rho, omega, c, cfg).optimal_value));
}

struct DivergenceResult {
  double value;        // d
  double radicand;     // D^2 - (S_rho + S_omega)/2 before clamping
  double distance_sq;  // D^2(rho, omega)
  double self_rho;
  double self_omega;
  SolverStatus status;
};

inline DivergenceResult divergence_details(const QubitState& rho, const QubitState& omega,
                                           const CostOperator& c, const SolverConfig& cfg = {}) {
  const TransportResult tr = solve_min_coupling(rho, omega, c, cfg);
  const double s_rho = self_distance_sq(rho, c);
  const double s_omega = detail::same_state(rho, omega) ? s_rho : self_distance_sq(omega, c);
  const double radicand = tr.optimal_value - 0.5 * (s_rho + s_omega);
  if (radicand < -10.0 * cfg.tolerance) {
    throw SolverAccuracyError("divergence radicand " + std::to_string(radicand) +
                              " is below the accuracy floor");
  }
  return {std::sqrt(std::max(0.0, radicand)), radicand, tr.optimal_value, s_rho, s_omega, tr.status};
}

inline double wasserstein_divergence(const QubitState& rho, const QubitState& omega, const CostOperator& c,
                                     const SolverConfig& cfg = {}) {
  return divergence_details(rho, omega, c, cfg).value;
}

/// Pi -> W Pi W^* with W = u_left (x) (u_right^*)^T. The result couples
/// (u_right rho u_right^*, u_left omega u_left^*).
inline Coupling coupling_conjugate(const Coupling& pi, const Mat2& u_left, const Mat2& u_right) {
  require_unitary(u_left, "coupling_conjugate");
  require_unitary(u_right, "coupling_conjugate");
  const Mat4 w = tensor(u_left, transpose_op(Mat2(u_right.adjoint())));
  const Mat2 omega = u_left * pi.first_marginal().matrix() * u_left.adjoint();
  const Mat2 rho_t = pi.second_marginal_transposed();
  const Mat2 rho = u_right * transpose_op(rho_t) * u_right.adjoint();
  return Coupling(w * pi.matrix() * w.adjoint(), QubitState::from_matrix((omega + omega.adjoint()) / 2.0),
                  QubitState::from_matrix((rho + rho.adjoint()) / 2.0), 1e-10);
}

}  // namespace qwasser

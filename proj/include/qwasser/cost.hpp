// Cost operators C_A = sum_j (A_j (x) I^T - I (x) A_j^T)^2.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qwasser/states.hpp"

namespace qwasser {

class GeneratorSet {
public:
  explicit GeneratorSet(std::vector<Mat2> observables) : obs_(std::move(observables)) {
    if (obs_.empty()) throw DomainError("generator set must not be empty");
    for (const auto& a : obs_) {
      if (!is_hermitian(a)) throw DomainError("generator is not Hermitian");
    }
  }

  const std::vector<Mat2>& observables() const { return obs_; }
  std::size_t size() const { return obs_.size(); }

private:
  std::vector<Mat2> obs_;
};

/// Cost operators compare by matrix only: different generator sets can
/// induce the same cost.
struct CostOperator {
  Mat4 matrix;
  GeneratorSet generators;
  std::string label;

  friend bool operator==(const CostOperator& a, const CostOperator& b) { return a.matrix == b.matrix; }
};

inline CostOperator build_cost(const GeneratorSet& gens, std::string label = "custom") {
  const Mat2 id = Mat2::Identity();
  Mat4 c = Mat4::Zero();
  for (const auto& a : gens.observables()) {
    const Mat4 d = tensor(a, transpose_op(id)) - tensor(id, transpose_op(a));
    c += d * d;
  }
  return {c, gens, std::move(label)};
}

inline GeneratorSet conjugate_generators(const GeneratorSet& gens, const Mat2& u) {
  require_unitary(u, "conjugate_generators");
  std::vector<Mat2> out;
  out.reserve(gens.size());
  for (const auto& a : gens.observables()) {
    Mat2 b = u * a * u.adjoint();
    out.push_back((b + b.adjoint()) / 2.0);
  }
  return GeneratorSet(std::move(out));
}

inline GeneratorSet pauli_generators() { return GeneratorSet({pauli(1), pauli(2), pauli(3)}); }

inline CostOperator sym_cost() { return build_cost(pauli_generators(), "sym"); }
inline CostOperator z_cost() { return build_cost(GeneratorSet({pauli(3)}), "z"); }

}  // namespace qwasser

#pragma once

#include <random>

#include "qwasser/sampling.hpp"

namespace qwasser::testing {

template <int N>
Eigen::Matrix<Complex, N, N> random_complex(Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Eigen::Matrix<Complex, N, N> m;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) m(i, j) = Complex(n(rng), n(rng));
  return m;
}

template <int N>
Eigen::Matrix<Complex, N, N> random_hermitian(Rng& rng, double scale = 1.0) {
  const auto g = random_complex<N>(rng, scale);
  return (g + g.adjoint()) / 2.0;
}

inline Mat2 random_psd2(Rng& rng) {
  const Mat2 g = random_complex<2>(rng);
  // rank one every fourth draw, so the boundary is covered
  if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) {
    const Eigen::Vector2cd v = g.col(0);
    return v * v.adjoint();
  }
  return g * g.adjoint();
}

inline Mat2 hadamard() {
  Mat2 h;
  h << 1.0, 1.0, 1.0, -1.0;
  return h / std::sqrt(2.0);
}

}  // namespace qwasser::testing

#include <gtest/gtest.h>

#include "qwasser/sampling.hpp"

namespace {

using namespace qwasser;

Mat2 m2(Complex a, Complex b, Complex c, Complex d) {
  Mat2 m;
  m << a, b, c, d;
  return m;
}

TEST(Pauli, Constants) {
  EXPECT_EQ(pauli(0), Mat2::Identity());
  EXPECT_EQ(pauli(1), m2(0, 1, 1, 0));
  EXPECT_EQ(pauli(2), m2(0, Complex(0, -1), Complex(0, 1), 0));
  EXPECT_EQ(pauli(3), m2(1, 0, 0, -1));
}

TEST(Pauli, IndexOutOfRange) {
  EXPECT_THROW(pauli(4), ContractViolation);
  EXPECT_THROW(pauli(-1), ContractViolation);
}

TEST(StateFromBloch, Examples) {
  EXPECT_EQ(state_from_bloch({0, 0, 0}).matrix(), Mat2(Mat2::Identity() / 2.0));
  EXPECT_EQ(state_from_bloch({0, 0, 1}).matrix(), m2(1, 0, 0, 0));
  EXPECT_EQ(state_from_bloch({1, 0, 0}).matrix(), m2(0.5, 0.5, 0.5, 0.5));
}

TEST(StateFromBloch, ClampsSlightOvershootRadially) {
  const QubitState s = state_from_bloch({0.0, 0.6 * (1.0 + 5e-11), 0.8 * (1.0 + 5e-11)});
  EXPECT_NEAR(s.bloch().norm(), 1.0, 1e-15);
  EXPECT_NEAR(s.bloch().y, 0.6, 1e-12);
  const QubitState t = state_from_bloch({0.0, 0.0, 1.0 + 5e-7});
  EXPECT_NEAR(t.bloch().z, 1.0, 1e-15);
}

TEST(StateFromBloch, RejectsOutsideBall) {
  EXPECT_THROW(state_from_bloch({0.0, 0.0, 1.0 + 2e-6}), DomainError);
  EXPECT_THROW(state_from_bloch({1.0, 1.0, 0.0}), DomainError);
  EXPECT_THROW(state_from_bloch({std::nan(""), 0.0, 0.0}), DomainError);
}

TEST(BlochFromState, Examples) {
  EXPECT_EQ(bloch_from_state(named::maximally_mixed()), (BlochVector{0, 0, 0}));
  EXPECT_EQ(bloch_from_state(QubitState::from_matrix(m2(1, 0, 0, 0))), (BlochVector{0, 0, 1}));
}

TEST(BlochFromState, IsThePauliExpectation) {
  Rng rng(1);
  for (int k = 0; k < 100; ++k) {
    const QubitState rho = random_mixed_state(rng);
    const BlochVector b = rho.bloch();
    const double expect[] = {b.x, b.y, b.z};
    for (int j = 1; j <= 3; ++j) ASSERT_NEAR((pauli(j) * rho.matrix()).trace().real(), expect[j - 1], 1e-15);
  }
}

TEST(BlochProperty, RoundTripFromVector) {
  Rng rng(2);
  for (int k = 0; k < 1000; ++k) {
    const BlochVector b = BlochVector::from(std::cbrt(uniform(rng)) * random_unit_vector(rng));
    const BlochVector back = bloch_from_state(state_from_bloch(b));
    ASSERT_LE((back - b).norm(), 1e-12);
  }
}

TEST(BlochProperty, RoundTripFromMatrix) {
  Rng rng(3);
  for (int k = 0; k < 1000; ++k) {
    const QubitState rho = random_mixed_state(rng);
    const Mat2 back = state_from_bloch(bloch_from_state(rho)).matrix();
    ASSERT_LE(max_abs_entry(back - rho.matrix()), 1e-12);
  }
}

TEST(BlochProperty, PsdBoundary) {
  Rng rng(4);
  for (int k = 0; k < 500; ++k) {
    const QubitState pure = random_pure_state(rng);
    ASSERT_NEAR(eig_hermitian(pure.matrix()).values(0), 0.0, 1e-10);
    const QubitState mixed = state_from_bloch(BlochVector::from(0.999 * uniform(rng) * random_unit_vector(rng)));
    ASSERT_GT(eig_hermitian(mixed.matrix()).values(0), 0.0);
  }
}

TEST(IsPure, Examples) {
  EXPECT_TRUE(is_pure(QubitState::from_matrix(m2(1, 0, 0, 0))));
  EXPECT_FALSE(is_pure(named::maximally_mixed()));
  EXPECT_TRUE(is_pure(state_from_bloch({0.6, 0.0, 0.8})));
}

TEST(IsPure, ToleranceIsOnBlochLength) {
  const QubitState near = state_from_bloch({0.0, 0.0, 1.0 - 1e-9});
  EXPECT_TRUE(is_pure(near));
  EXPECT_FALSE(is_pure(near, 1e-10));
  EXPECT_FALSE(is_pure(state_from_bloch({0.0, 0.0, 1.0 - 1e-7})));
}

TEST(QubitState, FromMatrixValidates) {
  EXPECT_THROW(QubitState::from_matrix(m2(1, 1, 0, 0)), DomainError);                  // not Hermitian
  EXPECT_THROW(QubitState::from_matrix(m2(0.6, 0, 0, 0.6)), DomainError);              // trace 1.2
  EXPECT_THROW(QubitState::from_matrix(m2(1.5, 0, 0, -0.5)), DomainError);             // negative eigenvalue
  EXPECT_NO_THROW(QubitState::from_matrix(m2(0.5, Complex(0, 0.5), Complex(0, -0.5), 0.5)));
}

TEST(NamedStates, Panel) {
  EXPECT_EQ(named::plus_z().bloch(), (BlochVector{0, 0, 1}));
  EXPECT_EQ(named::minus_z().bloch(), (BlochVector{0, 0, -1}));
  EXPECT_EQ(named::plus_x().bloch(), (BlochVector{1, 0, 0}));
  EXPECT_EQ(named::minus_x().bloch(), (BlochVector{-1, 0, 0}));
  EXPECT_EQ(named::plus_y().bloch(), (BlochVector{0, 1, 0}));
  EXPECT_EQ(named::minus_y().bloch(), (BlochVector{0, -1, 0}));
  EXPECT_EQ(named::maximally_mixed().bloch(), (BlochVector{0, 0, 0}));
}

TEST(Sampling, SubSeedsAreDeterministicAndDistinct) {
  Rng a = sub_rng(7, 3), b = sub_rng(7, 3), c = sub_rng(7, 4), d = sub_rng(8, 3);
  const auto va = a();
  EXPECT_EQ(va, b());
  EXPECT_NE(va, c());
  EXPECT_NE(va, d());
}

TEST(Sampling, MixedStatesFillTheBallUniformly) {
  Rng rng(5);
  int inner = 0;
  const int n = 20000;
  for (int k = 0; k < n; ++k) {
    const double r = random_mixed_state(rng).bloch().norm();
    ASSERT_LE(r, 1.0);
    inner += r < 0.5;
  }
  // volume fraction 1/8 inside radius 1/2
  EXPECT_NEAR(static_cast<double>(inner) / n, 0.125, 0.01);
}

TEST(Sampling, RandomUnitariesAreUnitary) {
  Rng rng(6);
  for (int k = 0; k < 200; ++k) ASSERT_TRUE(is_unitary(random_unitary(rng)));
}

TEST(Sampling, RandomRotationsAreProper) {
  Rng rng(7);
  for (int k = 0; k < 200; ++k) {
    const Eigen::Matrix3d o = random_rotation(rng);
    ASSERT_LE((o.transpose() * o - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    ASSERT_NEAR(o.determinant(), 1.0, 1e-12);
  }
}

}  // namespace

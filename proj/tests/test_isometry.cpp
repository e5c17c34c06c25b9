#include <gtest/gtest.h>

#include <cstdlib>
#include <numbers>

#include "qwasser/families.hpp"
#include "qwasser/isometry.hpp"

namespace {

using namespace qwasser;
constexpr double kPi = std::numbers::pi;

Eigen::Matrix3d rotation(double angle, const Eigen::Vector3d& axis) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

double bloch_gap(const BlochVector& a, const BlochVector& b) { return (a - b).norm(); }

TEST(Apply, SigmaXConjugationSwapsPoles) {
  const auto out = apply(StateMap::unitary(pauli(1)), named::plus_z());
  EXPECT_LE(max_abs_entry(out.matrix() - named::minus_z().matrix()), 1e-15);
}

TEST(Apply, ComplexConjugationFlipsY) {
  const auto out = apply(StateMap::antiunitary(Mat2::Identity()), state_from_bloch({0.1, 0.2, 0.3}));
  EXPECT_LE(bloch_gap(out.bloch(), {0.1, -0.2, 0.3}), 1e-15);
}

TEST(Apply, ZeroPhaseFieldIsIdentity) {
  Rng rng(1);
  const auto map = StateMap::z_phase_field([](const QubitState&) { return 0.0; });
  for (int k = 0; k < 20; ++k) {
    const QubitState rho = random_mixed_state(rng);
    ASSERT_LE(max_abs_entry(apply(map, rho).matrix() - rho.matrix()), 1e-15);
  }
}

TEST(Apply, ZPhaseFieldRotatesAboutZ) {
  const double t = 0.4;
  const auto map = StateMap::z_phase_field([t](const QubitState&) { return t; });
  const BlochVector out = apply(map, named::plus_x()).bloch();
  // exp(i t sz) rotates the Bloch vector by -2t about z
  EXPECT_LE(bloch_gap(out, {std::cos(2 * t), -std::sin(2 * t), 0.0}), 1e-12);
}

TEST(Apply, BlochMapOutsideBallIsDomainError) {
  const auto grow = StateMap::bloch([](const BlochVector& b) { return 2.0 * b; });
  EXPECT_THROW(apply(grow, named::plus_x()), DomainError);
  EXPECT_NO_THROW(apply(grow, state_from_bloch({0.2, 0.0, 0.0})));
}

TEST(StateMap, RejectsNonUnitaryPayload) {
  EXPECT_THROW(StateMap::unitary(Mat2(2.0 * Mat2::Identity())), ContractViolation);
  EXPECT_THROW(StateMap::antiunitary(pauli(1) + pauli(3)), ContractViolation);
}

TEST(StateMap, Kinds) {
  EXPECT_EQ(StateMap::unitary(pauli(1)).kind(), MapKind::unitary_conj);
  EXPECT_EQ(StateMap::antiunitary(pauli(1)).kind(), MapKind::antiunitary_conj);
  EXPECT_EQ(StateMap::bloch([](const BlochVector& b) { return b; }).kind(), MapKind::bloch_map);
  EXPECT_EQ(StateMap::z_phase_field([](const QubitState&) { return 0.0; }).kind(), MapKind::z_phase_field);
}

TEST(Compose, MatchesSequentialApplication) {
  Rng rng(2);
  for (int k = 0; k < 50; ++k) {
    const Mat2 u = random_unitary(rng), v = random_unitary(rng);
    const StateMap maps[] = {StateMap::unitary(u), StateMap::antiunitary(v),
                             families::z_phase_fields().sample(rng, k)};
    for (const auto& outer : maps)
      for (const auto& inner : maps) {
        const StateMap both = compose(outer, inner);
        const QubitState rho = random_mixed_state(rng);
        ASSERT_LE(max_abs_entry(apply(both, rho).matrix() - apply(outer, apply(inner, rho)).matrix()), 1e-12);
      }
  }
}

TEST(Compose, WignerPairsStayAlgebraic) {
  const auto a = StateMap::antiunitary(pauli(1)), u = StateMap::unitary(pauli(2));
  EXPECT_EQ(compose(a, a).kind(), MapKind::unitary_conj);
  EXPECT_EQ(compose(a, u).kind(), MapKind::antiunitary_conj);
  EXPECT_EQ(compose(u, a).kind(), MapKind::antiunitary_conj);
  EXPECT_EQ(compose(u, u).kind(), MapKind::unitary_conj);
}

TEST(RotationToUnitary, Identity) {
  const Mat2 u = rotation_to_unitary(Eigen::Matrix3d::Identity());
  EXPECT_TRUE(max_abs_entry(u - Mat2::Identity()) < 1e-15 || max_abs_entry(u + Mat2::Identity()) < 1e-15);
}

TEST(RotationToUnitary, PiAboutZ) {
  const Mat2 u = rotation_to_unitary(rotation(kPi, {0, 0, 1}));
  const Mat2 expected = Complex(0.0, -1.0) * pauli(3);
  EXPECT_TRUE(max_abs_entry(u - expected) < 1e-12 || max_abs_entry(u + expected) < 1e-12);
  const BlochVector out = apply(StateMap::unitary(u), state_from_bloch({0.3, 0.4, 0.5})).bloch();
  EXPECT_LE(bloch_gap(out, {-0.3, -0.4, 0.5}), 1e-12);
}

TEST(RotationToUnitary, HalfPiAboutX) {
  const Mat2 u = rotation_to_unitary(rotation(kPi / 2, {1, 0, 0}));
  EXPECT_LE(bloch_gap(apply(StateMap::unitary(u), named::plus_z()).bloch(), {0.0, -1.0, 0.0}), 1e-12);
}

TEST(RotationToUnitary, RejectsImproperAndNonOrthogonal) {
  EXPECT_THROW(rotation_to_unitary(Eigen::Vector3d(1, 1, -1).asDiagonal()), DomainError);
  EXPECT_THROW(rotation_to_unitary(2.0 * Eigen::Matrix3d::Identity()), DomainError);
}

TEST(RotationToUnitaryProperty, BlochActionFaithful) {
  Rng rng(3);
  for (int k = 0; k < 100; ++k) {
    const Eigen::Matrix3d o = random_rotation(rng);
    const Mat2 u = rotation_to_unitary(o);
    ASSERT_NEAR(std::abs(u.determinant()), 1.0, 1e-12);
    ASSERT_LE(std::abs(u.determinant() - Complex(1.0)), 1e-12);
    ASSERT_LE((rotation_of_unitary(u) - o).cwiseAbs().maxCoeff(), 1e-10);
    for (int s = 0; s < 100; ++s) {
      const QubitState rho = random_mixed_state(rng);
      const Eigen::Vector3d expected = o * rho.bloch().vec();
      ASSERT_LE(bloch_gap(apply(StateMap::unitary(u), rho).bloch(), BlochVector::from(expected)), 1e-8);
    }
  }
}

TEST(WignerMap, RealizesOrthogonalMatricesOfBothOrientations) {
  Rng rng(4);
  for (int k = 0; k < 100; ++k) {
    Eigen::Matrix3d o = random_rotation(rng);
    if (k % 2) o = -o;
    const StateMap map = wigner_map(o);
    EXPECT_EQ(map.kind(), k % 2 ? MapKind::antiunitary_conj : MapKind::unitary_conj);
    const QubitState rho = random_mixed_state(rng);
    ASSERT_LE(bloch_gap(apply(map, rho).bloch(), BlochVector::from(o * rho.bloch().vec())), 1e-10);
  }
}

TEST(CheckIsometry, UnitaryUnderDsym) {
  Rng rng(5);
  const auto report = check_isometry(StateMap::unitary(random_unitary(rng)), Metric::D_sym, 40, 1e-6, 9);
  EXPECT_EQ(report.verdict, Verdict::isometry_within_tol);
  EXPECT_FALSE(report.witness.has_value());
  EXPECT_EQ(report.samples, 28 + 40);
}

TEST(CheckIsometry, SmoothPhaseFieldUnderDz) {
  Rng rng(6);
  const auto map = StateMap::z_phase_field(families::detail::random_phase_function(rng, false));
  EXPECT_EQ(check_isometry(map, Metric::D_z, 40, 1e-6, 3).verdict, Verdict::isometry_within_tol);
}

TEST(CheckIsometry, DiscontinuousPhaseFieldUnderDz) {
  const auto map = StateMap::z_phase_field([](const QubitState& rho) { return rho.bloch().norm() > 0.5 ? 1.3 : -0.2; });
  EXPECT_EQ(check_isometry(map, Metric::D_z, 80, 1e-6, 4).verdict, Verdict::isometry_within_tol);
}

TEST(CheckIsometry, SwapWithRadialMapIsViolatedWithWitness) {
  const auto map = StateMap::bloch([](const BlochVector& b) {
    const double r = b.norm();
    return r == 0.0 ? b : r * BlochVector{b.y, b.x, b.z};
  });
  const auto report = check_isometry(map, Metric::D_z, 40, 1e-5, 5);
  ASSERT_EQ(report.verdict, Verdict::violated);
  ASSERT_TRUE(report.witness.has_value());
  EXPECT_GT(report.witness->deviation, 1e-5);
  EXPECT_EQ(report.witness->deviation, report.max_abs_deviation);
}

TEST(CheckIsometry, RejectsZeroSamples) {
  EXPECT_THROW(check_isometry(StateMap::unitary(pauli(1)), Metric::D_z, 0, 1e-6, 1), DomainError);
}

TEST(CheckIsometry, IndependentOfThreadCount) {
  Rng rng(7);
  const auto map = StateMap::unitary(random_unitary(rng));
  const auto serial = check_isometry(map, Metric::D_z, 60, 1e-6, 11);
  ::setenv("QWASSER_THREADS", "3", 1);
  const auto threaded = check_isometry(map, Metric::D_z, 60, 1e-6, 11);
  ::unsetenv("QWASSER_THREADS");
  EXPECT_EQ(serial.max_abs_deviation, threaded.max_abs_deviation);
  EXPECT_EQ(serial.verdict, threaded.verdict);
}

TEST(DzCondition, SigmaXNegates) {
  const auto c = satisfies_dz_condition(StateMap::unitary(pauli(1)), 100, 1e-6, 1);
  EXPECT_TRUE(c.satisfied);
  EXPECT_EQ(c.sign, -1);
}

TEST(DzCondition, ZRotationKeeps) {
  const auto c = satisfies_dz_condition(StateMap::unitary(z_phase(0.7)), 100, 1e-6, 2);
  EXPECT_TRUE(c.satisfied);
  EXPECT_EQ(c.sign, 1);
}

TEST(DzCondition, QuarterTurnAboutXFails) {
  const auto c = satisfies_dz_condition(StateMap::unitary(rotation_to_unitary(rotation(kPi / 2, {1, 0, 0}))), 100,
                                        1e-6, 3);
  EXPECT_FALSE(c.satisfied);
  EXPECT_TRUE(c.witness.has_value());
}

TEST(DzCondition, StateDependentSignFails) {
  const auto c =
      satisfies_dz_condition(StateMap::bloch([](const BlochVector& b) { return BlochVector{b.x, b.y, std::abs(b.z)}; }),
                             100, 1e-6, 4);
  EXPECT_FALSE(c.satisfied);
}

TEST(DzCondition, LengthChangeFails) {
  const auto c = satisfies_dz_condition(StateMap::bloch([](const BlochVector& b) { return 0.9 * b; }), 100, 1e-6, 5);
  EXPECT_FALSE(c.satisfied);
  EXPECT_GT(c.max_length_deviation, 1e-6);
}

TEST(Crosscheck, RandomUnitariesAgree) {
  const auto s = theorem_crosscheck_dz(families::random_unitaries(), 10, 20, 1e-5, 1);
  EXPECT_EQ(s.disagreements, 0);
  EXPECT_EQ(s.agreements, 10);
}

TEST(Crosscheck, ZAxisCompatibleUnitariesPassBoth) {
  const MapFamily fam{"z_compatible", [](Rng& rng, int i) {
                        const Mat2 uz = z_phase(uniform(rng, 0.0, 6.3));
                        return StateMap::unitary(i % 2 ? Mat2(pauli(1) * uz) : uz);
                      }};
  const auto s = theorem_crosscheck_dz(fam, 6, 20, 1e-5, 2);
  EXPECT_EQ(s.isometries, 6);
  EXPECT_EQ(s.disagreements, 0);
}

TEST(Crosscheck, PhaseFieldsPassBoth) {
  const auto s = theorem_crosscheck_dz(families::z_phase_fields(), 8, 20, 1e-5, 3);
  EXPECT_EQ(s.isometries, 8);
  EXPECT_EQ(s.disagreements, 0);
  for (const auto& e : s.entries) EXPECT_TRUE(e.condition.satisfied);
}

TEST(Crosscheck, B3NegatingBlochMapsPassBoth) {
  const auto s = theorem_crosscheck_dz(families::b3_negating_bloch_maps(), 8, 20, 1e-5, 4);
  EXPECT_EQ(s.isometries, 8);
  EXPECT_EQ(s.disagreements, 0);
  for (const auto& e : s.entries) EXPECT_EQ(e.condition.sign, -1);
}

TEST(Crosscheck, AdversarialMapsFailBothWithWitnesses) {
  const auto s = theorem_crosscheck_dz(families::adversarial(), 8, 20, 1e-5, 5);
  EXPECT_EQ(s.isometries, 0);
  EXPECT_EQ(s.disagreements, 0);
  for (const auto& e : s.entries) {
    EXPECT_TRUE(e.isometry.witness.has_value()) << e.isometry.map_id;
    EXPECT_TRUE(e.condition.witness.has_value()) << e.isometry.map_id;
  }
}

TEST(Diameter, PolePairIsTheOnlyMaximizerOnASample) {
  EXPECT_NEAR(metric_sq(Metric::D_z, named::plus_z(), named::minus_z(), {}), 4.0, 1e-12);
  Rng rng(8);
  for (int k = 0; k < 500; ++k) {
    const QubitState a = k % 2 ? random_pure_state(rng) : random_mixed_state(rng);
    const QubitState b = random_pure_state(rng);
    const double d = metric_sq(Metric::D_z, a, b, {});
    ASSERT_LE(d, 4.0 + 1e-9);
    if (d >= 4.0 - 1e-6) {
      ASSERT_LT(std::abs(std::abs(a.bloch().z) - 1.0), 1e-3);
      ASSERT_LT(std::abs(std::abs(b.bloch().z) - 1.0), 1e-3);
    }
  }
}

TEST(Parallel, ResultsIndependentOfThreads) {
  std::vector<double> a(97), b(97);
  parallel_for(a.size(), [&](std::size_t i) { a[i] = std::sin(static_cast<double>(i)); }, 1);
  parallel_for(b.size(), [&](std::size_t i) { b[i] = std::sin(static_cast<double>(i)); }, 4);
  EXPECT_EQ(a, b);
}

TEST(Parallel, RethrowsLowestFailingIndex) {
  try {
    parallel_for(
        20,
        [](std::size_t i) {
          if (i == 7 || i == 13) throw std::runtime_error("index " + std::to_string(i));
        },
        4);
    FAIL() << "expected an exception";
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "index 7");
  }
}

TEST(Parallel, ThreadHintParsing) {
  ::setenv("QWASSER_THREADS", "4", 1);
  EXPECT_EQ(thread_count_hint(), 4u);
  ::setenv("QWASSER_THREADS", "bogus", 1);
  EXPECT_EQ(thread_count_hint(), 1u);
  ::unsetenv("QWASSER_THREADS");
  EXPECT_EQ(thread_count_hint(), 1u);
}

}  // namespace

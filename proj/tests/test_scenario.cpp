#include "hardylab/scenario.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace hardylab;

namespace {

Matrix swap_columns(int d) {
  Matrix m = Matrix::Identity(d, d);
  m.col(0).swap(m.col(1));
  return m;
}

Behavior vertex(const Scenario& sc, int alice_out, int bob_out) {
  std::vector<double> p(static_cast<std::size_t>(sc.k) * sc.k * sc.d * sc.d, 0.0);
  for (int i = 0; i < sc.k; ++i)
    for (int j = 0; j < sc.k; ++j) p[((static_cast<std::size_t>(i) * sc.k + j) * sc.d + alice_out) * sc.d + bob_out] = 1;
  return Behavior(sc, p);
}

}  // namespace

TEST(Scenario, RejectsTooFewSettingsOrOutcomes) {
  EXPECT_THROW(Scenario(1, 3), std::invalid_argument);
  EXPECT_THROW(Scenario(3, 1), std::invalid_argument);
  EXPECT_NO_THROW(Scenario(2, 2));
}

TEST(NormalizeState, DividesByFrobeniusNorm) {
  const PureState s = normalize_state(Matrix::Identity(3, 3));
  EXPECT_TRUE(s.h().isApprox(Matrix::Identity(3, 3) / std::sqrt(3.0), 1e-15));

  const double th = std::numbers::pi / 6;
  Matrix diag = Matrix::Zero(2, 2);
  diag(0, 0) = std::cos(th);
  diag(1, 1) = std::sin(th);
  EXPECT_LT((normalize_state(diag).h() - diag).cwiseAbs().maxCoeff(), 1e-15);

  const PureState ones = normalize_state(Matrix::Ones(2, 2));
  EXPECT_LT((ones.h().array() - 0.5).abs().maxCoeff(), 1e-15);
}

TEST(NormalizeState, ZeroMatrixIsDegenerate) {
  EXPECT_THROW(normalize_state(Matrix::Zero(3, 3)), DegenerateError);
}

TEST(PureState, RejectsUnnormalizedOrNonSquare) {
  EXPECT_THROW(PureState(Matrix::Identity(2, 2)), std::invalid_argument);
  EXPECT_THROW(PureState(Matrix::Constant(2, 3, 1.0 / std::sqrt(6.0))), DimensionError);
}

TEST(Basis, RejectsNonOrthonormal) {
  Matrix m = Matrix::Identity(3, 3);
  m(0, 1) = 1e-6;
  EXPECT_THROW(Basis{m}, std::invalid_argument);
  EXPECT_NEAR(orthonormality_residual(m), 1e-6, 1e-12);
}

TEST(JointProbTable, MaximallyEntangledIsDiagonal) {
  const Matrix t = joint_prob_table(PureState::maximally_entangled(3), Basis::computational(3), Basis::computational(3));
  EXPECT_TRUE(t.isApprox(Matrix::Identity(3, 3) / 3.0, 1e-14));
}

TEST(JointProbTable, DiagonalState) {
  const double th = 0.37;
  Matrix h = Matrix::Zero(2, 2);
  h(0, 0) = std::cos(th);
  h(1, 1) = std::sin(th);
  const Matrix t = joint_prob_table(PureState(h), Basis::computational(2), Basis::computational(2));
  EXPECT_NEAR(t(0, 0), std::cos(th) * std::cos(th), 1e-15);
  EXPECT_NEAR(t(1, 1), std::sin(th) * std::sin(th), 1e-15);
  EXPECT_EQ(t(0, 1), 0.0);
  EXPECT_EQ(t(1, 0), 0.0);
}

TEST(JointProbTable, UpperTriangularQutritStateInComputationalBasis) {
  Matrix h(3, 3);
  h << 0.551527, -0.209186, 0.184342, 0, 0.519748, -0.209186, 0, 0, 0.551527;
  const PureState s = normalize_state(h);
  const Matrix t = joint_prob_table(s, Basis::computational(3), Basis::computational(3));
  const double n2 = h.squaredNorm();
  EXPECT_NEAR(t(0, 0), 0.551527 * 0.551527 / n2, 1e-12);
  EXPECT_NEAR(t(1, 1), 0.519748 * 0.519748 / n2, 1e-12);
  EXPECT_NEAR(t(2, 2), 0.551527 * 0.551527 / n2, 1e-12);
  EXPECT_NEAR(t(0, 2), 0.184342 * 0.184342 / n2, 1e-12);
  EXPECT_EQ(t(1, 0), 0.0);
  EXPECT_NEAR(t.sum(), 1.0, 1e-12);
}

TEST(JointProbTable, DimensionMismatchThrows) {
  EXPECT_THROW(joint_prob_table(PureState::maximally_entangled(3), Basis::computational(2), Basis::computational(3)),
               DimensionError);
}

TEST(ProbLess, Examples) {
  for (int d = 2; d <= 5; ++d) {
    EXPECT_EQ(prob_less(PureState::maximally_entangled(d), Basis::computational(d), Basis::computational(d)), 0.0);
  }
  const double th = 0.81;
  Matrix h = Matrix::Zero(2, 2);
  h(0, 0) = std::cos(th);
  h(1, 1) = std::sin(th);
  EXPECT_NEAR(prob_less(PureState(h), Basis::computational(2), Basis(swap_columns(2))), std::cos(th) * std::cos(th),
              1e-15);
}

TEST(ProbLess, PartitionsTheOutcomeGrid) {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 1000; ++n) {
    const int d = 2 + n % 4;
    const PureState s = fixtures::random_state(rng, d);
    const Basis a = fixtures::random_basis(rng, d), b = fixtures::random_basis(rng, d);
    const Matrix t = joint_prob_table(s, a, b);
    ASSERT_GE(t.minCoeff(), 0.0);
    ASSERT_NEAR(t.sum(), 1.0, 1e-10);
    ASSERT_NEAR(prob_less(s, a, b) + prob_greater(s, a, b) + t.trace(), 1.0, 1e-10);
  }
}

TEST(Behavior, QuantumBehaviorsAreNormalizedAndNonSignaling) {
  std::mt19937_64 rng(12);
  for (int n = 0; n < 1000; ++n) {
    const int k = 2 + n % 3, d = 2 + (n / 3) % 3;
    const Behavior b = behavior_from_quantum(fixtures::random_state(rng, d), fixtures::random_family(rng, k, d));
    ASSERT_LE(b.normalization_residual(), 1e-10);
    ASSERT_LE(b.no_signaling_residual(), 1e-10);
  }
}

TEST(Behavior, MaximallyEntangledComputationalIsDiagonal) {
  const int k = 3, d = 3;
  std::vector<Basis> comp(k, Basis::computational(d));
  const Behavior b = behavior_from_quantum(PureState::maximally_entangled(d), MeasurementFamily(comp, comp));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      for (int s = 0; s < d; ++s)
        for (int t = 0; t < d; ++t) EXPECT_NEAR(b(s, t, i, j), s == t ? 1.0 / d : 0.0, 1e-15);
}

TEST(Behavior, ProductStateGivesCertainOutcome) {
  Matrix h = Matrix::Zero(3, 3);
  h(0, 0) = 1;
  std::vector<Basis> comp(2, Basis::computational(3));
  const Behavior b = behavior_from_quantum(PureState(h), MeasurementFamily(comp, comp));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) EXPECT_EQ(b(0, 0, i, j), 1.0);
}

TEST(Behavior, RejectsSignalingAndBadNormalization) {
  const Scenario sc(2, 2);
  std::vector<double> p = white_noise_behavior(sc).data();
  p[0] += 0.1;
  EXPECT_THROW(Behavior(sc, p), std::invalid_argument);

  // Normalized blocks whose Alice marginal depends on Bob's setting.
  std::vector<double> q(16, 0.0);
  q[0] = 1;       // (i=0,j=0): s=0,t=0
  q[4 + 3] = 1;   // (i=0,j=1): s=1,t=1
  q[8] = 1;
  q[12] = 1;
  EXPECT_THROW(Behavior(sc, q), std::invalid_argument);
}

TEST(Behavior, ClampsRoundingNegatives) {
  EXPECT_EQ(clamp_probability(-5e-13), 0.0);
  EXPECT_THROW(clamp_probability(-1e-9), std::logic_error);
  EXPECT_EQ(clamp_probability(0.25), 0.25);
}

TEST(WhiteNoise, ProbLessIsExact) {
  for (int d = 2; d <= 5; ++d) {
    const Behavior b = white_noise_behavior(Scenario(3, d));
    for (double p : b.data()) EXPECT_DOUBLE_EQ(p, 1.0 / (d * d));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) EXPECT_NEAR(prob_less_from_behavior(b, i, j), (d - 1.0) / (2.0 * d), 1e-15);
  }
  EXPECT_NEAR(prob_less_from_behavior(white_noise_behavior(Scenario(2, 2)), 0, 0), 0.25, 1e-16);
  EXPECT_NEAR(prob_less_from_behavior(white_noise_behavior(Scenario(2, 3)), 1, 0), 1.0 / 3, 1e-16);
  EXPECT_NEAR(prob_less_from_behavior(white_noise_behavior(Scenario(2, 4)), 0, 1), 3.0 / 8, 1e-16);
}

TEST(MixBehaviors, EndpointsAndFixedPoint) {
  std::mt19937_64 rng(13);
  const Scenario sc(3, 3);
  const Behavior q = behavior_from_quantum(fixtures::random_state(rng, 3), fixtures::random_family(rng, 3, 3));
  const Behavior n = white_noise_behavior(sc);
  EXPECT_EQ(mix_behaviors(1.0, q, n).data(), q.data());
  EXPECT_EQ(mix_behaviors(0.0, q, n).data(), n.data());
  const Behavior w = mix_behaviors(0.5, n, n);
  for (std::size_t i = 0; i < w.data().size(); ++i) EXPECT_NEAR(w.data()[i], n.data()[i], 1e-16);
  EXPECT_THROW(mix_behaviors(1.5, q, n), std::invalid_argument);
  EXPECT_THROW(mix_behaviors(-0.1, q, n), std::invalid_argument);
  EXPECT_THROW(mix_behaviors(0.5, q, white_noise_behavior(Scenario(3, 2))), DimensionError);
}

TEST(ProbLessFromBehavior, DeterministicVertices) {
  const Scenario sc(3, 4);
  EXPECT_EQ(prob_less_from_behavior(vertex(sc, 0, 3), 1, 2), 1.0);
  EXPECT_EQ(prob_less_from_behavior(vertex(sc, 2, 2), 0, 0), 0.0);
  EXPECT_EQ(prob_greater_from_behavior(vertex(sc, 3, 0), 2, 1), 1.0);
  EXPECT_THROW(prob_less_from_behavior(vertex(sc, 0, 0), 3, 0), std::out_of_range);
}

#include "hardylab/appendix.hpp"
#include "hardylab/chain.hpp"

#include "test_support.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace hardylab;

namespace {

// Unit component of m_s orthogonal to the span of the columns in [lo, hi),
// via least squares; an independent route to the flag vectors.
Vector orthogonal_component(const Matrix& m, int s, int lo, int hi) {
  Vector v = m.col(s);
  if (hi > lo) {
    const Matrix sub = m.middleCols(lo, hi - lo);
    v -= sub * sub.colPivHouseholderQr().solve(v);
  }
  v.normalize();
  if (v.dot(m.col(s)) < 0) v = -v;
  return v;
}

Matrix rotation(double phi) {
  Matrix r(2, 2);
  r << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  return r;
}

PureState diagonal_qubit(double theta) {
  Matrix h = Matrix::Zero(2, 2);
  h(0, 0) = std::cos(theta);
  h(1, 1) = std::sin(theta);
  return PureState(h);
}

}  // namespace

TEST(ChainOrder, InterleavesFromAkToBk) {
  const auto order = chain_order(3);
  const std::vector<ChainSlot> expected = {{true, 3}, {false, 2}, {true, 2}, {false, 1}, {true, 1}, {false, 3}};
  EXPECT_EQ(order, expected);
}

TEST(HardyConstraints, FollowChainOrder) {
  const auto c = hardy_constraints(4);
  ASSERT_EQ(c.size(), 7u);
  EXPECT_TRUE(c[0].alice_less);
  EXPECT_EQ(c[0].alice_setting, 4);
  EXPECT_EQ(c[0].bob_setting, 3);
  EXPECT_FALSE(c[1].alice_less);
  EXPECT_EQ(c[1].alice_setting, 3);
  EXPECT_EQ(c[1].bob_setting, 3);
  EXPECT_TRUE(c[6].alice_less);
  EXPECT_EQ(c[6].alice_setting, 1);
  EXPECT_EQ(c[6].bob_setting, 4);
}

TEST(Anchor, ValidRangeAndDefaults) {
  EXPECT_THROW((Anchor{AnchorKind::bob_less_alice, 1}.validate(3)), std::invalid_argument);
  EXPECT_THROW((Anchor{AnchorKind::alice_less_bob, 4}.validate(3)), std::invalid_argument);
  EXPECT_NO_THROW((Anchor{AnchorKind::alice_less_bob, 3}.validate(3)));
  EXPECT_EQ(Anchor::default_for(3), (Anchor{AnchorKind::bob_less_alice, 2}));
  EXPECT_EQ(Anchor::default_for(4), (Anchor{AnchorKind::bob_less_alice, 3}));
  EXPECT_EQ(Anchor::default_for(5), (Anchor{AnchorKind::alice_less_bob, 3}));
  for (int k = 2; k <= 8; ++k) EXPECT_NO_THROW(Anchor::default_for(k).validate(k));
}

TEST(FlagOrthonormalize, IdentityAndTriangularInputs) {
  EXPECT_TRUE(flag_orthonormalize(Matrix::Identity(4, 4)).u().isApprox(Matrix::Identity(4, 4)));
  Matrix lower(3, 3);
  lower << 2, 0, 0, 0.5, 1, 0, -0.3, 0.7, 3;
  EXPECT_LT((flag_orthonormalize(lower).u() - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((reverse_flag_orthonormalize(lower.transpose()).u() - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(FlagOrthonormalize, RandomInputsMatchNullSpaceOracle) {
  std::mt19937_64 rng(21);
  for (int n = 0; n < 1000; ++n) {
    const int d = 2 + n % 4;
    const Matrix m = fixtures::random_matrix(rng, d, d);
    const Matrix q = flag_orthonormalize(m).u();
    const Matrix r = reverse_flag_orthonormalize(m).u();
    ASSERT_LE(orthonormality_residual(q), 1e-10);
    ASSERT_LE(orthonormality_residual(r), 1e-10);
    for (int s = 0; s < d; ++s) {
      for (int t = s + 1; t < d; ++t) ASSERT_LE(std::abs(q.col(s).dot(m.col(t))), 1e-10);
      for (int t = 0; t < s; ++t) ASSERT_LE(std::abs(r.col(s).dot(m.col(t))), 1e-10);
      ASSERT_GT(q.col(s).dot(m.col(s)), 0.0);
      ASSERT_GT(r.col(s).dot(m.col(s)), 0.0);
      ASSERT_LE((q.col(s) - orthogonal_component(m, s, s + 1, d)).cwiseAbs().maxCoeff(), 1e-9);
      ASSERT_LE((r.col(s) - orthogonal_component(m, s, 0, s)).cwiseAbs().maxCoeff(), 1e-9);
    }
  }
}

TEST(FlagOrthonormalize, RankDeficientIsDegenerate) {
  Matrix m = Matrix::Identity(3, 3);
  m.col(2) = m.col(1);
  EXPECT_THROW(flag_orthonormalize(m), DegenerateError);
  EXPECT_THROW(flag_orthonormalize(Matrix::Zero(3, 3)), DegenerateError);
}

TEST(TriangularProject, ZeroesForcedEntriesAndIsIdempotent) {
  std::mt19937_64 rng(22);
  const Matrix dense = fixtures::random_matrix(rng, 3, 3);
  const PureState up = triangular_project(dense, {AnchorKind::bob_less_alice, 2});
  EXPECT_TRUE(up.h().isUpperTriangular());
  EXPECT_NEAR(up.h().norm(), 1.0, 1e-15);
  const PureState again = triangular_project(up.h(), {AnchorKind::bob_less_alice, 2});
  EXPECT_EQ(again.h(), up.h());
  EXPECT_TRUE(triangular_project(dense, {AnchorKind::alice_less_bob, 2}).h().isLowerTriangular());

  const Matrix h5 = AppendixDataset::load(5).h;
  const PureState p5 = triangular_project(h5, {AnchorKind::alice_less_bob, 3});
  EXPECT_LT((p5.h() - normalize_state(h5).h()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PropagateChain, MaximallyEntangledStateNeverSucceeds) {
  for (int k = 2; k <= 5; ++k) {
    for (int d = 2; d <= 4; ++d) {
      for (auto kind : {AnchorKind::bob_less_alice, AnchorKind::alice_less_bob}) {
        const ChainResult r = propagate_chain(PureState::maximally_entangled(d), {kind, 2}, Scenario(k, d));
        EXPECT_LE(r.success, 1e-12) << "k=" << k << " d=" << d;
        EXPECT_LE(r.residual, 1e-12);
      }
    }
  }
}

TEST(PropagateChain, ReproducesPublishedQutritOptima) {
  const double expected[] = {0.267769, 0.348158, 0.40184};
  const double tol[] = {1e-5, 1e-5, 1e-4};
  for (int k = 3; k <= 5; ++k) {
    const AppendixDataset ds = AppendixDataset::load(k);
    const ChainResult r = propagate_chain(normalize_state(ds.h), ds.anchor, Scenario(k, 3));
    EXPECT_NEAR(r.success, expected[k - 3], tol[k - 3]) << "k=" << k;
    EXPECT_LE(r.residual, 1e-9);
    ASSERT_EQ(r.constraint_probs.size(), static_cast<std::size_t>(2 * k - 1));
  }
}

TEST(PropagateChain, RandomTriangularStatesSatisfyAllConstraints) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> pick(0, 1);
  for (int n = 0; n < 1000; ++n) {
    const int k = 2 + n % 4, d = 2 + (n / 4) % 3;
    std::uniform_int_distribution<int> idx(2, k);
    const Anchor anchor{pick(rng) ? AnchorKind::bob_less_alice : AnchorKind::alice_less_bob, idx(rng)};
    const PureState s = triangular_project(fixtures::random_matrix(rng, d, d), anchor);
    const ChainResult r = propagate_chain(s, anchor, Scenario(k, d));
    ASSERT_LE(r.residual, 1e-9);
    ASSERT_GE(r.success, 0.0);
    ASSERT_LE(r.success, 1.0);
    for (const auto& b : r.family.alice) ASSERT_LE(orthonormality_residual(b.u()), 1e-10);
    for (const auto& b : r.family.bob) ASSERT_LE(orthonormality_residual(b.u()), 1e-10);
  }
}

TEST(PropagateChain, SignFlipsLeaveProbabilitiesUnchanged) {
  std::mt19937_64 rng(24);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int n = 0; n < 200; ++n) {
    const int k = 3 + n % 3, d = 3;
    const Anchor anchor = Anchor::default_for(k);
    const PureState s = triangular_project(fixtures::random_matrix(rng, d, d), anchor);
    const Vector sv = s.h().jacobiSvd().singularValues();
    // Reseeding re-solves every link; near-singular states amplify rounding.
    if (sv(d - 1) < 0.05 * sv(0)) continue;
    const ChainResult r = propagate_chain(s, anchor, Scenario(k, d));
    const PureState neg(-s.h());
    EXPECT_NEAR(propagate_chain(neg, anchor, Scenario(k, d)).success, r.success, 1e-12);

    auto flipped = [&](const Basis& b) {
      Matrix u = b.u();
      for (int c = 0; c < d; ++c)
        if (coin(rng)) u.col(c) = -u.col(c);
      return Basis(u);
    };
    const Basis ak = flipped(r.family.alice[k - 1]);
    const Basis bk = flipped(r.family.bob[k - 1]);
    EXPECT_NEAR(prob_less(s, ak, bk), r.success, 1e-12);
    const ChainResult reseeded = propagate_chain_from(s, {true, k}, ak, Scenario(k, d));
    EXPECT_NEAR(reseeded.success, r.success, 1e-10);
  }
}

TEST(PropagateChain, InvalidInputs) {
  EXPECT_THROW(propagate_chain(PureState::maximally_entangled(3), {AnchorKind::bob_less_alice, 4}, Scenario(3, 3)),
               std::invalid_argument);
  EXPECT_THROW(propagate_chain(PureState::maximally_entangled(2), {AnchorKind::bob_less_alice, 2}, Scenario(3, 3)),
               DimensionError);
  Matrix singular = Matrix::Zero(3, 3);
  singular(0, 0) = 1;
  EXPECT_THROW(propagate_chain(PureState(singular), {AnchorKind::bob_less_alice, 2}, Scenario(3, 3)), DegenerateError);
}

TEST(QubitSuccess, ClosedFormZeros) {
  for (int k = 2; k <= 6; ++k) {
    EXPECT_NEAR(qubit_success(std::numbers::pi / 4, 0.3, k), 0.0, 1e-16);
    EXPECT_NEAR(qubit_success(0.4, 0.0, k), 0.0, 1e-16);
    EXPECT_NEAR(qubit_success(0.4, std::numbers::pi / 2, k), 0.0, 1e-16);
  }
  EXPECT_NEAR(qubit_success(0.0, std::numbers::pi / 2, 3), 0.0, 1e-16);
  EXPECT_THROW(qubit_success(0.4, 0.3, 1), std::invalid_argument);
}

TEST(QubitChainBasis, FormalAndSymmetricCases) {
  const double th = 0.3, ph = 1.1;
  const QubitChainBases one = qubit_chain_basis(th, ph, 1);
  Vector expected(2);
  expected << std::cos(th) * std::cos(ph), std::sin(th) * std::sin(ph);
  expected.normalize();
  EXPECT_LT((one.b_k.u().col(0) - expected).cwiseAbs().maxCoeff(), 1e-15);

  const QubitChainBases sym = qubit_chain_basis(std::numbers::pi / 4, ph, 4);
  EXPECT_LT((sym.b_k.u().col(0) - sym.a_k.u().col(0)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(QubitChainBasis, ReproducesClosedForm) {
  std::mt19937_64 rng(25);
  std::uniform_real_distribution<double> angle(0.05, std::numbers::pi / 2 - 0.05);
  for (int n = 0; n < 1000; ++n) {
    const double th = angle(rng), ph = angle(rng);
    const int k = 2 + n % 5;
    const QubitChainBases b = qubit_chain_basis(th, ph, k);
    ASSERT_NEAR(prob_less(diagonal_qubit(th), b.a_k, b.b_k), qubit_success(th, ph, k), 1e-12);
  }
}

TEST(PropagateChain, QubitChainMatchesClosedForm) {
  std::mt19937_64 rng(26);
  std::uniform_real_distribution<double> angle(0.05, std::numbers::pi / 2 - 0.05);
  for (int n = 0; n < 1000; ++n) {
    const double th = angle(rng), ph = angle(rng);
    const int k = 2 + n % 5;
    const ChainResult r = propagate_chain_from(diagonal_qubit(th), {true, k}, Basis(rotation(ph)), Scenario(k, 2));
    ASSERT_NEAR(r.success, qubit_success(th, ph, k), 1e-10) << "theta=" << th << " phi=" << ph << " k=" << k;
    ASSERT_LE(r.residual, 1e-12);
  }
}

#include "hardylab/json_io.hpp"
#include "hardylab/optimizer.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace hardylab;

namespace {

InequalityCoeffs coeffs(int k, int d, int x, int y, int z) {
  return InequalityCoeffs(k, d, Rational(x), Rational(y), Rational(z));
}

OptimizerConfig small(int restarts, std::uint64_t seed = 1) {
  OptimizerConfig cfg;
  cfg.restarts = restarts;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST(BasisFromAngles, ZeroAnglesGiveIdentity) {
  for (int d = 2; d <= 5; ++d) {
    const std::vector<double> zeros(angle_count(d), 0.0);
    EXPECT_EQ(basis_from_angles(zeros, d).u(), Matrix::Identity(d, d));
  }
}

TEST(BasisFromAngles, QubitRotation) {
  const double phi = 0.7;
  const Matrix u = basis_from_angles(std::vector<double>{phi}, 2).u();
  EXPECT_NEAR(u(0, 0), std::cos(phi), 1e-16);
  EXPECT_NEAR(u(1, 0), std::sin(phi), 1e-16);
  EXPECT_NEAR(u(0, 1), -std::sin(phi), 1e-16);
  EXPECT_NEAR(u(1, 1), std::cos(phi), 1e-16);
}

TEST(BasisFromAngles, RandomAnglesAreOrthonormal) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> a(-std::numbers::pi, std::numbers::pi);
  for (int n = 0; n < 1000; ++n) {
    const int d = 2 + n % 4;
    std::vector<double> angles(angle_count(d));
    for (auto& x : angles) x = a(rng);
    ASSERT_LE(orthonormality_residual(basis_from_angles(angles, d).u()), 1e-12);
  }
  EXPECT_THROW(basis_from_angles(std::vector<double>{0.1, 0.2}, 3), std::invalid_argument);
}

TEST(GhValue, WhiteNoiseAndConstantVertex) {
  EXPECT_NEAR(gh_value(white_noise_behavior(Scenario(3, 2)), coeffs(3, 2, 1, 1, 1)), -1.0, 1e-15);
  std::vector<Basis> comp(3, Basis::computational(3));
  Matrix h = Matrix::Zero(3, 3);
  h(0, 0) = 1;
  const Behavior constant = behavior_from_quantum(PureState(h), MeasurementFamily(comp, comp));
  EXPECT_EQ(gh_value(constant, coeffs(3, 3, 2, 1, 1)), 0.0);
  EXPECT_THROW(gh_value(constant, coeffs(4, 3, 1, 1, 1)), DimensionError);
}

TEST(GhValue, WhiteNoiseClosedForm) {
  for (int k = 2; k <= 5; ++k) {
    for (int d = 2; d <= 4; ++d) {
      for (auto [x, y, z] : {std::tuple{1, 1, 1}, std::tuple{2, 1, 1}, std::tuple{1, 2, 3}}) {
        const auto c = coeffs(k, d, x, y, z);
        const double m = std::min({x, y, z});
        const double expected = (d - 1.0) / (2.0 * d) * (m - (x + y) * (k - 1.0) - z);
        EXPECT_NEAR(gh_value(white_noise_behavior(Scenario(k, d)), c), expected, 1e-12);
        EXPECT_NEAR(gh_white_noise_value(c), expected, 1e-15);
      }
    }
  }
}

TEST(GhValue, QuantumValuesRespectTrivialBounds) {
  std::mt19937_64 rng(32);
  for (int n = 0; n < 1000; ++n) {
    const int k = 2 + n % 4, d = 2 + (n / 4) % 3;
    const auto c = coeffs(k, d, 1 + n % 2, 1, 1 + n % 3);
    const double v = gh_value(behavior_from_quantum(fixtures::random_state(rng, d), fixtures::random_family(rng, k, d)), c);
    const double m = to_double(c.m());
    ASSERT_LE(v, m + 1e-12);
    ASSERT_GE(v, -(to_double(c.x()) + to_double(c.y())) * (k - 1) - to_double(c.z()) - 1e-12);
  }
}

TEST(OptimizerConfig, Validation) {
  OptimizerConfig cfg;
  cfg.restarts = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = OptimizerConfig{};
  cfg.convergence_tol = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  EXPECT_EQ(OptimizerConfig::sp_defaults().restarts, 64);
  EXPECT_EQ(OptimizerConfig::gh_defaults().restarts, 256);
}

TEST(MaximizeSpQubit, SmallKValues) {
  EXPECT_NEAR(maximize_sp_qubit(2, small(16)).value, 0.09017, 1e-5);
  EXPECT_NEAR(maximize_sp_qubit(3, small(16)).value, 0.17455, 1e-5);
  EXPECT_NEAR(maximize_sp_qubit(6, small(16)).value, 0.29995, 1e-5);
}

TEST(MaximizeSpQubit, ApproachesOneHalf) {
  const double v200 = maximize_sp_qubit(200, small(32)).value;
  EXPECT_GT(v200, 0.46);
  EXPECT_LT(v200, 0.5);
  EXPECT_GE(v200, maximize_sp_qubit(50, small(32)).value - 1e-4);
}

TEST(MaximizeSp, QutritTwoSettingsAndRepropagation) {
  const Anchor anchor = Anchor::default_for(2);
  const OptResult r = maximize_sp(2, 3, anchor, small(16));
  EXPECT_NEAR(r.value, 0.141327, 1e-3);
  EXPECT_LE(r.residual, 1e-9);
  const ChainResult again = propagate_chain(r.state, anchor, Scenario(2, 3));
  EXPECT_EQ(again.success, r.value);
  EXPECT_EQ(r.restarts_used, 16);
  EXPECT_EQ(r.restart_values.size(), 16u);
}

TEST(MaximizeSp, MonotoneInSettings) {
  double previous = 0.0;
  for (int k = 2; k <= 4; ++k) {
    const double v = maximize_sp(k, 3, Anchor::default_for(k), small(16)).value;
    EXPECT_GE(v, previous - 1e-4) << "k=" << k;
    previous = v;
  }
}

TEST(MaximizeGh, TwoSettingQutritCells) {
  EXPECT_NEAR(maximize_gh(coeffs(2, 3, 1, 1, 1), StateRestriction::any_state, small(16)).value, 0.304951, 1e-3);
  const OptResult mes = maximize_gh(coeffs(2, 3, 1, 1, 1), StateRestriction::mes_only, small(16));
  EXPECT_NEAR(mes.value, 0.290978, 1e-3);
  EXPECT_LT((mes.state.h() - PureState::maximally_entangled(3).h()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LE(mes.residual, 1e-12);
}

TEST(MaximizeGh, ReportedValueMatchesStoredOptimum) {
  const auto c = coeffs(3, 2, 1, 1, 1);
  const OptResult r = maximize_gh(c, StateRestriction::any_state, small(8));
  EXPECT_NEAR(gh_value(behavior_from_quantum(r.state, r.family), c), r.value, 1e-12);
}

TEST(ComputeNtv, ThreeSettingQubit) {
  const NtvResult r = compute_ntv(coeffs(3, 2, 1, 1, 1), small(32));
  EXPECT_NEAR(r.visibility, 0.7698, 1e-4);
  EXPECT_NEAR(r.visibility, 2.0 / (3.0 * std::cos(std::numbers::pi / 6)), 2e-5);
  EXPECT_NEAR(r.noise_value, -1.0, 1e-15);
  EXPECT_NEAR(r.visibility, r.noise_value / (r.noise_value - r.quantum_value), 1e-15);
}

TEST(SeededDeterminism, IdenticalSeedsGiveIdenticalJson) {
  std::mt19937_64 rng(33);
  std::uniform_int_distribution<std::uint64_t> seeds;
  for (int n = 0; n < 4; ++n) {
    const std::uint64_t seed = seeds(rng);
    OptimizerConfig a = small(6, seed), b = small(6, seed);
    a.threads = 1;
    b.threads = 3;
    EXPECT_EQ(to_json(maximize_sp(3, 3, Anchor::default_for(3), a)).dump(),
              to_json(maximize_sp(3, 3, Anchor::default_for(3), b)).dump());
    EXPECT_EQ(to_json(maximize_gh(coeffs(2, 3, 2, 1, 1), StateRestriction::any_state, a)).dump(),
              to_json(maximize_gh(coeffs(2, 3, 2, 1, 1), StateRestriction::any_state, b)).dump());
  }
  const OptResult s1 = maximize_sp_qubit(4, small(4, 1)), s2 = maximize_sp_qubit(4, small(4, 2));
  EXPECT_NE(s1.restart_values, s2.restart_values);
}

TEST(WorkerCount, HonorsExplicitRequest) {
  EXPECT_EQ(worker_count(3), 3);
  EXPECT_GE(worker_count(0), 1);
}

#include "hardylab/scenario.hpp"

#include <algorithm>
#include <cmath>

namespace hardylab {

Scenario::Scenario(int settings, int outcomes) : k(settings), d(outcomes) {
  if (k < 2 || d < 2) {
    throw std::invalid_argument("scenario requires k >= 2 and d >= 2");
  }
}

PureState::PureState(Matrix h) : h_(std::move(h)) {
  if (h_.rows() != h_.cols() || h_.rows() < 1) {
    throw DimensionError("state coefficient matrix must be square");
  }
  if (std::abs(h_.norm() - 1.0) > kNormalizationTol) {
    throw std::invalid_argument("state coefficient matrix is not normalized");
  }
}

PureState PureState::maximally_entangled(int d) {
  return PureState(Matrix::Identity(d, d) / std::sqrt(static_cast<double>(d)));
}

double orthonormality_residual(const Matrix& u) {
  const Matrix gram = u.transpose() * u;
  return (gram - Matrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
}

Basis::Basis(Matrix u) : u_(std::move(u)) {
  if (u_.rows() != u_.cols() || u_.rows() < 1) {
    throw DimensionError("basis matrix must be square");
  }
  if (orthonormality_residual(u_) > kOrthonormalityTol) {
    throw std::invalid_argument("basis matrix is not orthonormal");
  }
}

Basis Basis::computational(int d) { return Basis(Matrix::Identity(d, d)); }

MeasurementFamily::MeasurementFamily(std::vector<Basis> a, std::vector<Basis> b)
    : alice(std::move(a)), bob(std::move(b)) {
  if (alice.size() != bob.size() || alice.size() < 2) {
    throw DimensionError("measurement family needs k >= 2 bases per party");
  }
  const int d = alice.front().dim();
  auto same_dim = [d](const Basis& x) { return x.dim() == d; };
  if (!std::all_of(alice.begin(), alice.end(), same_dim) ||
      !std::all_of(bob.begin(), bob.end(), same_dim)) {
    throw DimensionError("all bases in a family must share one dimension");
  }
}

double clamp_probability(double p) {
  if (p < -kNegativeClampTol) {
    throw std::logic_error("negative probability " + std::to_string(p));
  }
  return p < 0.0 ? 0.0 : p;
}

Behavior::Behavior(Scenario sc, std::vector<double> p) : sc_(sc), p_(std::move(p)) {
  const std::size_t expected = static_cast<std::size_t>(sc_.k) * sc_.k * sc_.d * sc_.d;
  if (p_.size() != expected) {
    throw DimensionError("behavior table has wrong size");
  }
  for (double& x : p_) x = clamp_probability(x);
  if (normalization_residual() > kBehaviorTol) {
    throw std::invalid_argument("behavior blocks are not normalized");
  }
  if (no_signaling_residual() > kBehaviorTol) {
    throw std::invalid_argument("behavior violates no-signaling");
  }
}

double Behavior::normalization_residual() const {
  double worst = 0.0;
  for (int i = 0; i < sc_.k; ++i) {
    for (int j = 0; j < sc_.k; ++j) {
      double total = 0.0;
      for (int s = 0; s < sc_.d; ++s)
        for (int t = 0; t < sc_.d; ++t) total += (*this)(s, t, i, j);
      worst = std::max(worst, std::abs(total - 1.0));
    }
  }
  return worst;
}

double Behavior::no_signaling_residual() const {
  const int k = sc_.k;
  const int d = sc_.d;
  double worst = 0.0;
  auto alice_marginal = [&](int s, int i, int j) {
    double m = 0.0;
    for (int t = 0; t < d; ++t) m += (*this)(s, t, i, j);
    return m;
  };
  auto bob_marginal = [&](int t, int i, int j) {
    double m = 0.0;
    for (int s = 0; s < d; ++s) m += (*this)(s, t, i, j);
    return m;
  };
  for (int x = 0; x < k; ++x) {
    for (int o = 0; o < d; ++o) {
      const double ref_a = alice_marginal(o, x, 0);
      const double ref_b = bob_marginal(o, 0, x);
      for (int y = 1; y < k; ++y) {
        worst = std::max(worst, std::abs(alice_marginal(o, x, y) - ref_a));
        worst = std::max(worst, std::abs(bob_marginal(o, y, x) - ref_b));
      }
    }
  }
  return worst;
}

PureState normalize_state(const Matrix& h) {
  const double n = h.norm();
  if (n == 0.0 || !std::isfinite(n)) {
    throw DegenerateError("degenerate state");
  }
  return PureState(h / n);
}

namespace {

void check_dims(const PureState& state, const Basis& a, const Basis& b) {
  if (a.dim() != state.dim() || b.dim() != state.dim()) {
    throw DimensionError("state and basis dimensions differ");
  }
}

}  // namespace

Matrix joint_prob_table(const PureState& state, const Basis& a, const Basis& b) {
  check_dims(state, a, b);
  Matrix amp = a.u().transpose() * state.h() * b.u();
  return amp.array().square().matrix();
}

double prob_less_unchecked(const Matrix& h, const Matrix& a, const Matrix& b) {
  const Matrix amp = a.transpose() * h * b;
  double total = 0.0;
  for (Eigen::Index t = 1; t < amp.cols(); ++t)
    for (Eigen::Index s = 0; s < t; ++s) total += amp(s, t) * amp(s, t);
  return total;
}

double prob_greater_unchecked(const Matrix& h, const Matrix& a, const Matrix& b) {
  const Matrix amp = a.transpose() * h * b;
  double total = 0.0;
  for (Eigen::Index t = 0; t < amp.cols(); ++t)
    for (Eigen::Index s = t + 1; s < amp.rows(); ++s) total += amp(s, t) * amp(s, t);
  return total;
}

double prob_less(const PureState& state, const Basis& a, const Basis& b) {
  check_dims(state, a, b);
  return prob_less_unchecked(state.h(), a.u(), b.u());
}

double prob_greater(const PureState& state, const Basis& a, const Basis& b) {
  check_dims(state, a, b);
  return prob_greater_unchecked(state.h(), a.u(), b.u());
}

Behavior behavior_from_quantum(const PureState& state, const MeasurementFamily& fam) {
  const int k = fam.settings();
  const int d = state.dim();
  if (fam.dim() != d) throw DimensionError("state and family dimensions differ");
  std::vector<double> p;
  p.reserve(static_cast<std::size_t>(k) * k * d * d);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const Matrix block = joint_prob_table(state, fam.alice[i], fam.bob[j]);
      for (int s = 0; s < d; ++s)
        for (int t = 0; t < d; ++t) p.push_back(block(s, t));
    }
  }
  return Behavior(Scenario(k, d), std::move(p));
}

Behavior white_noise_behavior(const Scenario& sc) {
  const std::size_t n = static_cast<std::size_t>(sc.k) * sc.k * sc.d * sc.d;
  return Behavior(sc, std::vector<double>(n, 1.0 / (static_cast<double>(sc.d) * sc.d)));
}

Behavior mix_behaviors(double v, const Behavior& q, const Behavior& n) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument("visibility must lie in [0,1]");
  }
  if (!(q.scenario() == n.scenario())) {
    throw DimensionError("cannot mix behaviors of different scenarios");
  }
  std::vector<double> p(q.data().size());
  for (std::size_t idx = 0; idx < p.size(); ++idx) {
    p[idx] = v * q.data()[idx] + (1.0 - v) * n.data()[idx];
  }
  return Behavior(q.scenario(), std::move(p));
}

namespace {

void check_setting(const Behavior& b, int i, int j) {
  const int k = b.scenario().k;
  if (i < 0 || j < 0 || i >= k || j >= k) {
    throw std::out_of_range("setting index out of range");
  }
}

}  // namespace

double prob_less_from_behavior(const Behavior& b, int i, int j) {
  check_setting(b, i, j);
  const int d = b.scenario().d;
  double total = 0.0;
  for (int s = 0; s < d; ++s)
    for (int t = s + 1; t < d; ++t) total += b(s, t, i, j);
  return total;
}

double prob_greater_from_behavior(const Behavior& b, int i, int j) {
  check_setting(b, i, j);
  const int d = b.scenario().d;
  double total = 0.0;
  for (int t = 0; t < d; ++t)
    for (int s = t + 1; s < d; ++s) total += b(s, t, i, j);
  return total;
}

}  // namespace hardylab

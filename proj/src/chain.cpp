#include "hardylab/chain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hardylab {

std::vector<ChainSlot> chain_order(int k) {
  std::vector<ChainSlot> order;
  order.reserve(2 * k);
  for (int m = 0; m < k; ++m) {
    order.push_back({true, k - m});
    if (m < k - 1) order.push_back({false, k - 1 - m});
  }
  order.push_back({false, k});
  return order;
}

std::vector<ZeroConstraint> hardy_constraints(int k) {
  const auto order = chain_order(k);
  std::vector<ZeroConstraint> out;
  out.reserve(order.size() - 1);
  for (std::size_t p = 0; p + 1 < order.size(); ++p) {
    const ChainSlot& left = order[p];
    const ChainSlot& right = order[p + 1];
    // The left slot is always the party whose outcome must not be smaller.
    if (left.alice) {
      out.push_back({left.setting, right.setting, true});
    } else {
      out.push_back({right.setting, left.setting, false});
    }
  }
  return out;
}

void Anchor::validate(int k) const {
  if (index < 2 || index > k) {
    throw std::invalid_argument("anchor index " + std::to_string(index) + " outside 2.." +
                                std::to_string(k));
  }
}

int Anchor::left_position(int k) const {
  validate(k);
  return kind == AnchorKind::alice_less_bob ? 2 * (k - index) : 2 * (k - index) + 1;
}

Anchor Anchor::default_for(int k) {
  switch (k) {
    case 3: return {AnchorKind::bob_less_alice, 2};
    case 4: return {AnchorKind::bob_less_alice, 3};
    case 5: return {AnchorKind::alice_less_bob, 3};
    default: break;
  }
  const int left = k - 1;
  if (left % 2 == 0) return {AnchorKind::alice_less_bob, k - left / 2};
  return {AnchorKind::bob_less_alice, k - (left - 1) / 2};
}

namespace {

// Gram-Schmidt with one reorthogonalization pass, visiting columns in the
// given order.
Matrix ordered_gram_schmidt(const Matrix& m, bool last_first) {
  const Eigen::Index d = m.rows();
  if (m.cols() != d) throw DimensionError("flag orthonormalization needs a square matrix");
  const double scale = m.colwise().norm().maxCoeff();
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DegenerateError("degenerate chain step");

  Matrix q(d, d);
  for (Eigen::Index n = 0; n < d; ++n) {
    const Eigen::Index s = last_first ? d - 1 - n : n;
    Vector v = m.col(s);
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index prev = 0; prev < n; ++prev) {
        const Eigen::Index t = last_first ? d - 1 - prev : prev;
        v -= q.col(t).dot(v) * q.col(t);
      }
    }
    const double norm = v.norm();
    if (norm <= 1e-12 * scale) throw DegenerateError("degenerate chain step");
    q.col(s) = v / norm;
  }
  return q;
}

enum class Derive { upper, lower };

struct Step {
  bool use_transpose;  // derive from H^T * known instead of H * known
  Derive flag;
};

// Deriving the unknown neighbour across constraint c. `known_is_alice` tells
// which side is given.
Step step_for(const ZeroConstraint& c, bool known_is_alice) {
  // P(A<B)=0 is a_s^T H b_t = 0 for s < t; P(B<A)=0 the same for s > t.
  if (c.alice_less) {
    return known_is_alice ? Step{true, Derive::lower} : Step{false, Derive::upper};
  }
  return known_is_alice ? Step{true, Derive::upper} : Step{false, Derive::lower};
}

Matrix derive(const Matrix& h, const Matrix& known, const Step& step) {
  const Matrix m = step.use_transpose ? Matrix(h.transpose() * known) : Matrix(h * known);
  return ordered_gram_schmidt(m, step.flag == Derive::upper);
}

ChainResult walk(const PureState& state, const Scenario& sc, std::vector<std::optional<Matrix>> slots,
                 int first_known, int last_known) {
  const int k = sc.k;
  if (state.dim() != sc.d) throw DimensionError("state dimension does not match scenario");
  const auto order = chain_order(k);
  const auto constraints = hardy_constraints(k);
  const Matrix& h = state.h();

  for (int p = first_known - 1; p >= 0; --p) {
    slots[p] = derive(h, *slots[p + 1], step_for(constraints[p], order[p + 1].alice));
  }
  for (int p = last_known + 1; p < 2 * k; ++p) {
    slots[p] = derive(h, *slots[p - 1], step_for(constraints[p - 1], order[p - 1].alice));
  }

  std::vector<Basis> alice(k, Basis::computational(sc.d));
  std::vector<Basis> bob(k, Basis::computational(sc.d));
  for (std::size_t p = 0; p < order.size(); ++p) {
    auto& target = order[p].alice ? alice : bob;
    target[order[p].setting - 1] = Basis(std::move(*slots[p]));
  }
  MeasurementFamily family(std::move(alice), std::move(bob));

  std::vector<double> probs;
  probs.reserve(constraints.size());
  double residual = 0.0;
  for (const auto& c : constraints) {
    const Basis& a = family.alice[c.alice_setting - 1];
    const Basis& b = family.bob[c.bob_setting - 1];
    const double p = c.alice_less ? prob_less(state, a, b) : prob_greater(state, a, b);
    probs.push_back(p);
    residual = std::max(residual, p);
  }
  const double success = prob_less(state, family.alice[k - 1], family.bob[k - 1]);
  return ChainResult{std::move(family), success, residual, std::move(probs)};
}

}  // namespace

Basis flag_orthonormalize(const Matrix& m) { return Basis(ordered_gram_schmidt(m, true)); }

Basis reverse_flag_orthonormalize(const Matrix& m) { return Basis(ordered_gram_schmidt(m, false)); }

ChainResult propagate_chain(const PureState& state, const Anchor& anchor, const Scenario& sc) {
  const int left = anchor.left_position(sc.k);
  std::vector<std::optional<Matrix>> slots(2 * sc.k);
  slots[left] = Matrix::Identity(sc.d, sc.d);
  slots[left + 1] = Matrix::Identity(sc.d, sc.d);
  return walk(state, sc, std::move(slots), left, left + 1);
}

ChainResult propagate_chain_from(const PureState& state, const ChainSlot& slot, const Basis& seed,
                                 const Scenario& sc) {
  if (slot.setting < 1 || slot.setting > sc.k) throw std::invalid_argument("chain slot out of range");
  if (seed.dim() != sc.d) throw DimensionError("seed basis dimension does not match scenario");
  const auto order = chain_order(sc.k);
  const auto it = std::find(order.begin(), order.end(), slot);
  const int pos = static_cast<int>(it - order.begin());
  std::vector<std::optional<Matrix>> slots(2 * sc.k);
  slots[pos] = seed.u();
  return walk(state, sc, std::move(slots), pos, pos);
}

PureState triangular_project(const Matrix& h, const Anchor& anchor) {
  if (h.rows() != h.cols()) throw DimensionError("state coefficient matrix must be square");
  Matrix out = anchor.kind == AnchorKind::bob_less_alice
                   ? Matrix(h.triangularView<Eigen::Upper>())
                   : Matrix(h.triangularView<Eigen::Lower>());
  return normalize_state(out);
}

double qubit_success(double theta, double phi, int k) {
  if (k < 2) throw std::invalid_argument("qubit ladder needs k >= 2");
  const double ct = std::cos(theta), st = std::sin(theta);
  const double cp = std::cos(phi), sp = std::sin(phi);
  const double num_b0 = std::pow(st, 2 * k - 1) * sp;
  const double num_b1 = std::pow(ct, 2 * k - 1) * cp;
  const double denom = num_b0 * num_b0 + num_b1 * num_b1;
  if (!(denom > 1e-300)) throw DegenerateError("vanishing denominator in qubit success");
  const double gap = std::pow(st, 2 * k - 2) - std::pow(ct, 2 * k - 2);
  return sp * sp * cp * cp * ct * ct * st * st * gap * gap / denom;
}

QubitChainBases qubit_chain_basis(double theta, double phi, int k) {
  if (k < 1) throw std::invalid_argument("qubit ladder needs k >= 1");
  const double ct = std::cos(theta), st = std::sin(theta);
  const double cp = std::cos(phi), sp = std::sin(phi);
  Matrix a(2, 2);
  a << cp, -sp, sp, cp;
  Vector b0(2);
  b0 << std::pow(ct, 2 * k - 1) * cp, std::pow(st, 2 * k - 1) * sp;
  const double n = b0.norm();
  if (!(n > 1e-300)) throw DegenerateError("degenerate qubit chain vector");
  b0 /= n;
  Matrix b(2, 2);
  b.col(0) = b0;
  b(0, 1) = b0(1);
  b(1, 1) = -b0(0);
  return {Basis(std::move(a)), Basis(std::move(b))};
}

}  // namespace hardylab

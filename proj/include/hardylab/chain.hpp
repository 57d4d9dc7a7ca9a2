#pragma once

// Hardy-paradox constraint chain. For k settings the zero constraints are
//
//   P(A_i < B_{i-1}) = 0,  P(B_{i-1} < A_{i-1}) = 0   (i = 2..k),
//   P(A_1 < B_k) = 0,
//
// and the nonlocal event is A_k < B_k. Read left to right the constraints link
// the bases A_k, B_{k-1}, A_{k-1}, ..., B_1, A_1, B_k; given H, each basis in
// that sequence fixes its neighbours up to signs.

#include "hardylab/scenario.hpp"

#include <optional>
#include <vector>

namespace hardylab {

/// One slot in the chain order. Settings are 1-based, as in A_1..A_k.
struct ChainSlot {
  bool alice = true;
  int setting = 1;

  friend bool operator==(const ChainSlot&, const ChainSlot&) = default;
};

/// A zero constraint between two neighbouring slots.
struct ZeroConstraint {
  int alice_setting = 1;  // 1-based
  int bob_setting = 1;    // 1-based
  bool alice_less = true; // P(A < B) = 0 when true, P(B < A) = 0 otherwise
};

/// A_k, B_{k-1}, A_{k-1}, ..., B_1, A_1, B_k.
std::vector<ChainSlot> chain_order(int k);

/// The 2k-1 zero constraints in chain order; entry p links slots p and p+1.
std::vector<ZeroConstraint> hardy_constraints(int k);

enum class AnchorKind {
  bob_less_alice,  // (B_{i-1}, A_{i-1}) computational; H upper-triangular
  alice_less_bob,  // (A_i, B_{i-1}) computational; H lower-triangular
};

struct Anchor {
  AnchorKind kind = AnchorKind::bob_less_alice;
  int index = 2;

  /// Throws std::invalid_argument unless 2 <= index <= k.
  void validate(int k) const;
  /// Chain position of the anchored pair's left slot.
  int left_position(int k) const;

  /// A_1=B_1 for k=3, A_2=B_2 for k=4, A_3=B_2 for k=5; otherwise the pair
  /// straddling the middle of the chain.
  static Anchor default_for(int k);

  friend bool operator==(const Anchor&, const Anchor&) = default;
};

struct ChainResult {
  MeasurementFamily family;
  double success = 0.0;
  double residual = 0.0;
  std::vector<double> constraint_probs;  // aligned with hardy_constraints(k)
};

/// Orthonormal q with q_s orthogonal to every column m_t, t > s. Columns are
/// orthonormalized last to first; q_s^T m_s > 0. Throws DegenerateError on a
/// rank-deficient m.
Basis flag_orthonormalize(const Matrix& m);

/// Mirror image: q_t orthogonal to every column m_s, s < t (first-to-last
/// Gram-Schmidt, q_t^T m_t > 0).
Basis reverse_flag_orthonormalize(const Matrix& m);

/// Fixes the anchored pair to the computational basis and derives every other
/// basis from the zero constraints.
ChainResult propagate_chain(const PureState& state, const Anchor& anchor, const Scenario& sc);

/// Same walk, seeded by one known basis at an arbitrary slot.
ChainResult propagate_chain_from(const PureState& state, const ChainSlot& slot, const Basis& seed,
                                 const Scenario& sc);

/// Zeroes the entries the anchored constraint forbids and renormalizes.
PureState triangular_project(const Matrix& h, const Anchor& anchor);

/// Closed-form P(A_k < B_k) for H = diag(cos theta, sin theta) and
/// A_{k,0} = (cos phi, sin phi).
double qubit_success(double theta, double phi, int k);

struct QubitChainBases {
  Basis a_k;
  Basis b_k;
};

/// A_k and B_k for the qubit ladder; B_{k,0} is proportional to
/// H^T (H H^T)^{k-1} A_{k,0}. k = 1 is accepted as the formal base case.
QubitChainBases qubit_chain_basis(double theta, double phi, int k);

}  // namespace hardylab

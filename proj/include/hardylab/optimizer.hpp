#pragma once

// Multistart searches for SP_{k,d} (chain success probability), the maximal
// quantum value of GH_{k,d}(x,y,z), and the critical white-noise visibility.

#include "hardylab/chain.hpp"
#include "hardylab/inequality.hpp"
#include "hardylab/scenario.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace hardylab {

class NoViolationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Number of Givens angles parameterizing a d x d rotation.
constexpr std::size_t angle_count(int d) { return static_cast<std::size_t>(d) * (d - 1) / 2; }

/// Product of plane rotations G(0,1) G(0,2) ... G(d-2,d-1); G(p,q) has
/// cos on (p,p),(q,q), -sin at (p,q) and sin at (q,p).
Basis basis_from_angles(std::span<const double> angles, int d);

struct OptimizerConfig {
  int restarts = 64;
  int max_iterations = 50000;    // objective evaluations per simplex run
  std::uint64_t seed = 1;        // restart r draws from seed + r
  double convergence_tol = 1e-13;
  double penalty_weight = 0.0;   // unused: constraints are eliminated, not penalized
  int polish_rounds = 8;
  int threads = 0;               // 0: HARDYLAB_THREADS or hardware concurrency

  void validate() const;
  static OptimizerConfig sp_defaults();
  static OptimizerConfig gh_defaults();
};

struct OptResult {
  double value = 0.0;
  PureState state;
  MeasurementFamily family;
  double residual = 0.0;
  int restarts_used = 0;
  std::uint64_t seed = 0;
  std::vector<double> restart_values;  // best value reached by each restart, in restart order

  /// Restarts ending within tol of the best value.
  int hits(double tol = 1e-6) const;
  /// Best minus median restart value.
  double spread() const;
};

/// Maximizes P(A_k < B_k) over anchor-triangular states; every other basis
/// follows from the zero constraints.
OptResult maximize_sp(int k, int d, const Anchor& anchor, const OptimizerConfig& cfg);

/// Two-angle search over the qubit closed form.
OptResult maximize_sp_qubit(int k, const OptimizerConfig& cfg);

double gh_value(const Behavior& behavior, const InequalityCoeffs& coeffs);

enum class StateRestriction { any_state, mes_only };

/// Free search over all 2k bases and (unless mes_only) Schmidt coefficients.
OptResult maximize_gh(const InequalityCoeffs& coeffs, StateRestriction restriction,
                      const OptimizerConfig& cfg);

struct NtvResult {
  double visibility = 1.0;
  double quantum_value = 0.0;  // G_Q at the optimum
  double noise_value = 0.0;    // G_N, value at white noise
  OptResult optimum;
};

/// Smallest visibility v with v*G_Q + (1-v)*G_N > 0. Throws NoViolationError
/// when no quantum violation is found.
NtvResult compute_ntv(const InequalityCoeffs& coeffs, const OptimizerConfig& cfg);

/// ((d-1)/(2d)) (m - (x+y)(k-1) - z): GH at white noise.
double gh_white_noise_value(const InequalityCoeffs& coeffs);

/// Worker count from HARDYLAB_THREADS, falling back to hardware concurrency.
int worker_count(int requested);

}  // namespace hardylab

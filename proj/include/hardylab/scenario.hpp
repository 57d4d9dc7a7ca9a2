#pragma once

// Bipartite scenarios with k settings per party and d outcomes per setting,
// real pure states, von Neumann measurement bases and behaviors.

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hardylab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kNormalizationTol = 1e-12;
inline constexpr double kOrthonormalityTol = 1e-10;
inline constexpr double kBehaviorTol = 1e-10;
inline constexpr double kNegativeClampTol = 1e-12;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Scenario {
  int k = 2;  // settings per party
  int d = 2;  // outcomes per setting

  Scenario() = default;
  Scenario(int settings, int outcomes);

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Bipartite pure state sum_ij h_ij |i>|j> held as its real coefficient
/// matrix H. Always unit Frobenius norm.
class PureState {
 public:
  /// Wraps an already-normalized matrix; throws if the norm is off by more
  /// than kNormalizationTol.
  explicit PureState(Matrix h);

  const Matrix& h() const { return h_; }
  int dim() const { return static_cast<int>(h_.rows()); }

  static PureState maximally_entangled(int d);

 private:
  Matrix h_;
};

/// Orthonormal basis; column s is the vector for outcome s.
class Basis {
 public:
  explicit Basis(Matrix u);

  static Basis computational(int d);

  const Matrix& u() const { return u_; }
  int dim() const { return static_cast<int>(u_.rows()); }
  auto column(int s) const { return u_.col(s); }

 private:
  Matrix u_;
};

/// Max |U^T U - I| entry; used for reporting printed (possibly inaccurate) bases.
double orthonormality_residual(const Matrix& u);

struct MeasurementFamily {
  std::vector<Basis> alice;
  std::vector<Basis> bob;

  MeasurementFamily(std::vector<Basis> a, std::vector<Basis> b);

  int settings() const { return static_cast<int>(alice.size()); }
  int dim() const { return alice.front().dim(); }
};

/// Joint table p(s,t|i,j). Settings i,j are 0-based here (setting A_1 is
/// index 0).
class Behavior {
 public:
  Behavior(Scenario sc, std::vector<double> p);

  const Scenario& scenario() const { return sc_; }
  double operator()(int s, int t, int i, int j) const { return p_[index(s, t, i, j)]; }
  const std::vector<double>& data() const { return p_; }

  /// Max deviation from normalization and no-signaling over all blocks.
  double normalization_residual() const;
  double no_signaling_residual() const;

 private:
  std::size_t index(int s, int t, int i, int j) const {
    return ((static_cast<std::size_t>(i) * sc_.k + j) * sc_.d + s) * sc_.d + t;
  }

  Scenario sc_;
  std::vector<double> p_;
};

PureState normalize_state(const Matrix& h);

/// Entry (s,t) is (a_s^T H b_t)^2.
Matrix joint_prob_table(const PureState& state, const Basis& a, const Basis& b);

/// P(A < B): Alice's outcome strictly below Bob's.
double prob_less(const PureState& state, const Basis& a, const Basis& b);
/// P(B < A): Bob's outcome strictly below Alice's.
double prob_greater(const PureState& state, const Basis& a, const Basis& b);

// Same quantities on raw matrices without orthonormality or normalization
// checks; used for printed data that only holds to a few digits.
double prob_less_unchecked(const Matrix& h, const Matrix& a, const Matrix& b);
double prob_greater_unchecked(const Matrix& h, const Matrix& a, const Matrix& b);

Behavior behavior_from_quantum(const PureState& state, const MeasurementFamily& fam);
Behavior white_noise_behavior(const Scenario& sc);
Behavior mix_behaviors(double v, const Behavior& q, const Behavior& n);

double prob_less_from_behavior(const Behavior& b, int i, int j);
double prob_greater_from_behavior(const Behavior& b, int i, int j);

/// Clamps rounding-level negatives to zero; throws on anything below -kNegativeClampTol.
double clamp_probability(double p);

}  // namespace hardylab

#pragma once

#include "hardylab/scenario.hpp"

#include <boost/rational.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace hardylab {

// Compare only against other Rational values: boost 1.74's mixed
// rational/integer comparisons recurse under C++20 operator rewriting.
using Rational = boost::rational<std::int64_t>;

/// Parses "2", "-3/4" or a plain decimal such as "0.125" into an exact rational.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& r);
inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

/// Generalized Hardy inequality
///   m P(A_k<B_k) - x sum P(A_i<B_{i-1}) - y sum P(B_{i-1}<A_{i-1}) - z P(A_1<B_k) <= 0
/// with m = min{x, y, z}.
class InequalityCoeffs {
 public:
  InequalityCoeffs(int k, int d, Rational x, Rational y, Rational z);

  const Scenario& scenario() const { return sc_; }
  int k() const { return sc_.k; }
  int d() const { return sc_.d; }
  const Rational& x() const { return x_; }
  const Rational& y() const { return y_; }
  const Rational& z() const { return z_; }
  const Rational& m() const { return m_; }

 private:
  Scenario sc_;
  Rational x_, y_, z_, m_;
};

}  // namespace hardylab

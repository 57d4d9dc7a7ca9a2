#pragma once

// Incremental rank of integer row vectors.
//
// ModularRank works in GF(p), p = 2^61 - 1. Rows independent mod p are
// independent over Q, so its rank is a certified lower bound on the rational
// rank. IntegerRank is exact (fraction-free elimination on big integers) and
// settles the cases where the modular bound does not reach the target.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <span>
#include <vector>

namespace hardylab::detail {

class ModularRank {
 public:
  explicit ModularRank(std::size_t columns) : columns_(columns), scratch_(columns) {}

  /// Returns true when the row raised the rank.
  bool add(std::span<const std::int64_t> row);
  int rank() const { return static_cast<int>(rows_.size()); }

 private:
  static constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;
  static std::uint64_t mul(std::uint64_t a, std::uint64_t b);
  static std::uint64_t inverse(std::uint64_t a);
  static std::uint64_t reduce(std::int64_t v);

  std::size_t columns_;
  std::vector<std::vector<std::uint64_t>> rows_;  // pivot entry normalized to 1
  std::vector<std::size_t> pivots_;
  std::vector<std::uint64_t> scratch_;
};

class IntegerRank {
 public:
  using Int = boost::multiprecision::cpp_int;

  explicit IntegerRank(std::size_t columns) : columns_(columns) {}

  bool add(std::span<const std::int64_t> row);
  int rank() const { return static_cast<int>(rows_.size()); }

 private:
  std::size_t columns_;
  std::vector<std::vector<Int>> rows_;
  std::vector<std::size_t> pivots_;
};

}  // namespace hardylab::detail

#include "exact_rank.hpp"

#include <stdexcept>

namespace hardylab::detail {

std::uint64_t ModularRank::mul(std::uint64_t a, std::uint64_t b) {
  const unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
  std::uint64_t lo = static_cast<std::uint64_t>(prod & kPrime);
  std::uint64_t hi = static_cast<std::uint64_t>(prod >> 61);
  std::uint64_t r = lo + hi;
  if (r >= kPrime) r -= kPrime;
  return r;
}

std::uint64_t ModularRank::inverse(std::uint64_t a) {
  // Fermat: a^(p-2).
  std::uint64_t result = 1;
  std::uint64_t base = a;
  std::uint64_t e = kPrime - 2;
  while (e) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

std::uint64_t ModularRank::reduce(std::int64_t v) {
  const std::int64_t p = static_cast<std::int64_t>(kPrime);
  std::int64_t r = v % p;
  if (r < 0) r += p;
  return static_cast<std::uint64_t>(r);
}

bool ModularRank::add(std::span<const std::int64_t> row) {
  if (row.size() != columns_) throw std::invalid_argument("row length mismatch");
  for (std::size_t c = 0; c < columns_; ++c) scratch_[c] = reduce(row[c]);
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const std::uint64_t f = scratch_[pivots_[r]];
    if (f == 0) continue;
    const std::uint64_t neg = kPrime - f;
    const auto& basis = rows_[r];
    for (std::size_t c = pivots_[r]; c < columns_; ++c) {
      if (basis[c] == 0) continue;
      std::uint64_t v = scratch_[c] + mul(neg, basis[c]);
      if (v >= kPrime) v -= kPrime;
      scratch_[c] = v;
    }
  }
  std::size_t pivot = 0;
  while (pivot < columns_ && scratch_[pivot] == 0) ++pivot;
  if (pivot == columns_) return false;
  const std::uint64_t inv = inverse(scratch_[pivot]);
  std::vector<std::uint64_t> stored(columns_, 0);
  for (std::size_t c = pivot; c < columns_; ++c) stored[c] = mul(scratch_[c], inv);
  rows_.push_back(std::move(stored));
  pivots_.push_back(pivot);
  return true;
}

bool IntegerRank::add(std::span<const std::int64_t> row) {
  if (row.size() != columns_) throw std::invalid_argument("row length mismatch");
  std::vector<Int> v(row.begin(), row.end());
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const std::size_t p = pivots_[r];
    if (v[p] == 0) continue;
    const Int a = rows_[r][p];
    const Int b = v[p];
    for (std::size_t c = 0; c < columns_; ++c) v[c] = a * v[c] - b * rows_[r][c];
  }
  std::size_t pivot = 0;
  while (pivot < columns_ && v[pivot] == 0) ++pivot;
  if (pivot == columns_) return false;
  Int g = 0;
  for (const auto& x : v) {
    if (x != 0) g = boost::multiprecision::gcd(g, boost::multiprecision::abs(x));
  }
  if (g > 1) {
    for (auto& x : v) x /= g;
  }
  rows_.push_back(std::move(v));
  pivots_.push_back(pivot);
  return true;
}

}  // namespace hardylab::detail

#include "hardylab/polytope.hpp"

#include "exact_rank.hpp"

#include <boost/integer/common_factor.hpp>

#include <limits>
#include <string>

namespace hardylab {

namespace {

// Odometer over (a_1..a_k, b_1..b_k), last digit fastest. `fn` returns false
// to stop early.
template <class Fn>
void for_each_strategy(const Scenario& sc, std::uint64_t cap, Fn&& fn) {
  vertex_count(sc, cap);
  const int digits = 2 * sc.k;
  std::vector<int> out(digits, 0);
  while (true) {
    if (!fn(out)) return;
    int pos = digits - 1;
    while (pos >= 0 && ++out[pos] == sc.d) out[pos--] = 0;
    if (pos < 0) return;
  }
}

// GH scaled to integers by the common denominator of x, y, z.
struct ScaledCoeffs {
  std::int64_t x, y, z, m, scale;

  explicit ScaledCoeffs(const InequalityCoeffs& c) {
    scale = boost::integer::lcm(boost::integer::lcm(c.x().denominator(), c.y().denominator()),
                                c.z().denominator());
    auto as_int = [&](const Rational& r) { return r.numerator() * (scale / r.denominator()); };
    x = as_int(c.x());
    y = as_int(c.y());
    z = as_int(c.z());
    m = as_int(c.m());
  }

  // outputs = (a_1..a_k, b_1..b_k)
  std::int64_t value(const std::vector<int>& out, int k) const {
    const int* a = out.data();
    const int* b = out.data() + k;
    std::int64_t v = (a[k - 1] < b[k - 1]) ? m : 0;
    for (int i = 1; i < k; ++i) {
      if (a[i] < b[i - 1]) v -= x;
      if (b[i - 1] < a[i - 1]) v -= y;
    }
    if (a[0] < b[k - 1]) v -= z;
    return v;
  }
};

void vertex_row(const std::vector<int>& out, const Scenario& sc, std::vector<std::int64_t>& row) {
  const int k = sc.k, d = sc.d;
  std::fill(row.begin(), row.end(), 0);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      row[((static_cast<std::size_t>(i) * k + j) * d + out[i]) * d + out[k + j]] = 1;
    }
  }
}

std::size_t coordinate_count(const Scenario& sc) {
  return static_cast<std::size_t>(sc.k) * sc.k * sc.d * sc.d;
}

// Affine rank of the selected vertices, stopping once `target` is reached.
// Returns {rank, used_exact_fallback}.
template <class Select>
std::pair<int, bool> affine_rank(const Scenario& sc, std::uint64_t cap, int target, Select&& select) {
  const std::size_t cols = coordinate_count(sc);
  std::vector<std::int64_t> origin, row(cols), diff(cols);

  auto run = [&](auto& ranker) {
    origin.clear();
    for_each_strategy(sc, cap, [&](const std::vector<int>& out) {
      if (!select(out)) return true;
      vertex_row(out, sc, row);
      if (origin.empty()) {
        origin = row;
        return true;
      }
      for (std::size_t c = 0; c < cols; ++c) diff[c] = row[c] - origin[c];
      ranker.add(diff);
      return ranker.rank() < target;
    });
    return ranker.rank();
  };

  detail::ModularRank modular(cols);
  const int lower = run(modular);
  if (lower >= target) return {lower, false};
  detail::IntegerRank exact(cols);
  return {run(exact), true};
}

}  // namespace

std::uint64_t vertex_count(const Scenario& sc, std::uint64_t cap) {
  std::uint64_t n = 1;
  for (int i = 0; i < 2 * sc.k; ++i) {
    if (n > cap / static_cast<std::uint64_t>(sc.d)) {
      throw CapExceededError("d^(2k) exceeds the vertex cap of " + std::to_string(cap));
    }
    n *= static_cast<std::uint64_t>(sc.d);
  }
  if (n > cap) throw CapExceededError("d^(2k) exceeds the vertex cap of " + std::to_string(cap));
  return n;
}

Behavior vertex_behavior(const DeterministicStrategy& strategy, const Scenario& sc) {
  const int k = sc.k;
  if (static_cast<int>(strategy.alice_outputs.size()) != k || static_cast<int>(strategy.bob_outputs.size()) != k) {
    throw DimensionError("strategy length does not match k");
  }
  std::vector<int> out(strategy.alice_outputs);
  out.insert(out.end(), strategy.bob_outputs.begin(), strategy.bob_outputs.end());
  for (int o : out) {
    if (o < 0 || o >= sc.d) throw std::out_of_range("strategy output outside 0..d-1");
  }
  std::vector<std::int64_t> row(coordinate_count(sc));
  vertex_row(out, sc, row);
  return Behavior(sc, std::vector<double>(row.begin(), row.end()));
}

void enumerate_vertices(const Scenario& sc, const VertexVisitor& visit, std::uint64_t cap) {
  DeterministicStrategy strategy;
  for_each_strategy(sc, cap, [&](const std::vector<int>& out) {
    strategy.alice_outputs.assign(out.begin(), out.begin() + sc.k);
    strategy.bob_outputs.assign(out.begin() + sc.k, out.end());
    visit(strategy, vertex_behavior(strategy, sc));
    return true;
  });
}

Rational gh_at_vertex(const DeterministicStrategy& strategy, const InequalityCoeffs& coeffs) {
  const int k = coeffs.k();
  if (static_cast<int>(strategy.alice_outputs.size()) != k || static_cast<int>(strategy.bob_outputs.size()) != k) {
    throw DimensionError("strategy length does not match k");
  }
  const auto& a = strategy.alice_outputs;
  const auto& b = strategy.bob_outputs;
  Rational v = (a[k - 1] < b[k - 1]) ? coeffs.m() : Rational(0);
  for (int i = 1; i < k; ++i) {
    if (a[i] < b[i - 1]) v -= coeffs.x();
    if (b[i - 1] < a[i - 1]) v -= coeffs.y();
  }
  if (a[0] < b[k - 1]) v -= coeffs.z();
  return v;
}

LocalBound local_bound(const InequalityCoeffs& coeffs, std::uint64_t cap) {
  const ScaledCoeffs sc(coeffs);
  const int k = coeffs.k();
  std::int64_t best = std::numeric_limits<std::int64_t>::min();
  std::uint64_t count = 0, total = 0;
  for_each_strategy(coeffs.scenario(), cap, [&](const std::vector<int>& out) {
    ++total;
    const std::int64_t v = sc.value(out, k);
    if (v > best) {
      best = v;
      count = 1;
    } else if (v == best) {
      ++count;
    }
    return true;
  });
  return LocalBound{Rational(best, sc.scale), count, total};
}

int no_signaling_dimension(const Scenario& sc) {
  return 2 * sc.k * (sc.d - 1) + sc.k * sc.k * (sc.d - 1) * (sc.d - 1);
}

int polytope_dimension(const Scenario& sc, std::uint64_t cap) {
  // The local polytope sits inside the no-signaling set, so its dimension
  // cannot exceed that bound; reaching it ends the scan.
  return affine_rank(sc, cap, no_signaling_dimension(sc), [](const std::vector<int>&) { return true; }).first;
}

TightnessCertificate is_tight(const InequalityCoeffs& coeffs, std::uint64_t cap) {
  TightnessCertificate cert;
  const LocalBound bound = local_bound(coeffs, cap);
  cert.local_bound = bound.value;
  cert.polytope_dimension = polytope_dimension(coeffs.scenario(), cap);
  if (bound.value != Rational(0)) return cert;
  cert.saturating_vertices = bound.maximizers;

  const ScaledCoeffs scaled(coeffs);
  const int k = coeffs.k();
  const int target = cert.polytope_dimension - 1;
  const auto [rank, fallback] = affine_rank(coeffs.scenario(), cap, target,
                                            [&](const std::vector<int>& out) { return scaled.value(out, k) == 0; });
  cert.achieved_rank = rank;
  cert.exact_fallback = fallback;
  cert.tight = rank == target;
  return cert;
}

}  // namespace hardylab

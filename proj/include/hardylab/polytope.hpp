#pragma once

// Local deterministic polytope of the (k, d) bipartite scenario: vertex
// enumeration, exact evaluation of GH at vertices, and facet (tightness)
// checks by affine rank.

#include "hardylab/inequality.hpp"
#include "hardylab/scenario.hpp"

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace hardylab {

inline constexpr std::uint64_t kDefaultVertexCap = 10'000'000;

class CapExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Outputs of a local deterministic model; index i is setting i+1.
struct DeterministicStrategy {
  std::vector<int> alice_outputs;
  std::vector<int> bob_outputs;
};

/// d^(2k); throws CapExceededError above cap.
std::uint64_t vertex_count(const Scenario& sc, std::uint64_t cap = kDefaultVertexCap);

/// 0/1 behavior of a deterministic strategy.
Behavior vertex_behavior(const DeterministicStrategy& strategy, const Scenario& sc);

using VertexVisitor = std::function<void(const DeterministicStrategy&, const Behavior&)>;

/// Visits all d^(2k) strategies exactly once, in lexicographic order with
/// Bob's last output varying fastest.
void enumerate_vertices(const Scenario& sc, const VertexVisitor& visit, std::uint64_t cap = kDefaultVertexCap);

Rational gh_at_vertex(const DeterministicStrategy& strategy, const InequalityCoeffs& coeffs);

struct LocalBound {
  Rational value;
  std::uint64_t maximizers = 0;  // vertices attaining the bound
  std::uint64_t vertices = 0;
};

/// Exact maximum of GH over all local deterministic strategies.
LocalBound local_bound(const InequalityCoeffs& coeffs, std::uint64_t cap = kDefaultVertexCap);

/// 2k(d-1) + k^2 (d-1)^2, the dimension of the no-signaling set.
int no_signaling_dimension(const Scenario& sc);

/// Affine dimension of the local polytope, by exact rank of the vertex
/// differences in the full d^2 k^2 coordinates.
int polytope_dimension(const Scenario& sc, std::uint64_t cap = kDefaultVertexCap);

struct TightnessCertificate {
  bool tight = false;
  Rational local_bound;
  int polytope_dimension = 0;
  std::uint64_t saturating_vertices = 0;
  int achieved_rank = 0;          // affine rank of the saturating vertices
  bool exact_fallback = false;    // true when the multiprecision pass was needed
};

/// Facet test: GH <= 0 is tight iff the vertices with GH = 0 span an affine
/// space of dimension polytope_dimension - 1.
TightnessCertificate is_tight(const InequalityCoeffs& coeffs, std::uint64_t cap = kDefaultVertexCap);

}  // namespace hardylab

#include "hardylab/json_io.hpp"

#include <stdexcept>

namespace hardylab {

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j.at(r);
    if (static_cast<Eigen::Index>(row.size()) != cols) throw std::invalid_argument("ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row.at(c).get<double>();
  }
  return m;
}

Json to_json(const Scenario& sc) { return {{"k", sc.k}, {"d", sc.d}}; }

Json to_json(const PureState& state) { return {{"d", state.dim()}, {"h", matrix_to_json(state.h())}}; }

Json to_json(const Basis& basis) { return {{"d", basis.dim()}, {"u", matrix_to_json(basis.u())}}; }

Json to_json(const MeasurementFamily& fam) {
  Json a = Json::array(), b = Json::array();
  for (const auto& x : fam.alice) a.push_back(matrix_to_json(x.u()));
  for (const auto& x : fam.bob) b.push_back(matrix_to_json(x.u()));
  return {{"k", fam.settings()}, {"d", fam.dim()}, {"alice", std::move(a)}, {"bob", std::move(b)}};
}

Json to_json(const Behavior& behavior) {
  // p[i][j] is the d x d block p(s,t|i,j), settings 0-based.
  const auto& sc = behavior.scenario();
  Json blocks = Json::array();
  for (int i = 0; i < sc.k; ++i) {
    Json row = Json::array();
    for (int j = 0; j < sc.k; ++j) {
      Matrix block(sc.d, sc.d);
      for (int s = 0; s < sc.d; ++s)
        for (int t = 0; t < sc.d; ++t) block(s, t) = behavior(s, t, i, j);
      row.push_back(matrix_to_json(block));
    }
    blocks.push_back(std::move(row));
  }
  return {{"k", sc.k}, {"d", sc.d}, {"p", std::move(blocks)}};
}

Json to_json(const Anchor& anchor) {
  return {{"kind", anchor.kind == AnchorKind::bob_less_alice ? "bob_less_alice" : "alice_less_bob"},
          {"index", anchor.index}};
}

Json to_json(const InequalityCoeffs& c) {
  return {{"k", c.k()}, {"d", c.d()}, {"x", to_string(c.x())}, {"y", to_string(c.y())},
          {"z", to_string(c.z())}, {"m", to_string(c.m())}};
}

Json to_json(const ChainResult& chain) {
  return {{"success", chain.success},
          {"residual", chain.residual},
          {"constraint_probs", chain.constraint_probs},
          {"family", to_json(chain.family)}};
}

Json to_json(const OptResult& r) {
  return {{"value", r.value},
          {"residual", r.residual},
          {"restarts_used", r.restarts_used},
          {"seed", r.seed},
          {"hits", r.hits()},
          {"spread", r.spread()},
          {"restart_values", r.restart_values},
          {"state", to_json(r.state)},
          {"family", to_json(r.family)}};
}

Json to_json(const TightnessCertificate& c) {
  return {{"tight", c.tight},
          {"local_bound", to_string(c.local_bound)},
          {"polytope_dimension", c.polytope_dimension},
          {"saturating_vertices", c.saturating_vertices},
          {"achieved_rank", c.achieved_rank},
          {"exact_fallback", c.exact_fallback}};
}

Scenario scenario_from_json(const Json& j) { return Scenario(j.at("k").get<int>(), j.at("d").get<int>()); }

PureState state_from_json(const Json& j) { return PureState(matrix_from_json(j.at("h"))); }

Basis basis_from_json(const Json& j) { return Basis(matrix_from_json(j.at("u"))); }

MeasurementFamily family_from_json(const Json& j) {
  std::vector<Basis> a, b;
  for (const auto& m : j.at("alice")) a.emplace_back(matrix_from_json(m));
  for (const auto& m : j.at("bob")) b.emplace_back(matrix_from_json(m));
  return MeasurementFamily(std::move(a), std::move(b));
}

Behavior behavior_from_json(const Json& j) {
  const Scenario sc = scenario_from_json(j);
  std::vector<double> p;
  p.reserve(static_cast<std::size_t>(sc.k) * sc.k * sc.d * sc.d);
  const Json& blocks = j.at("p");
  for (int i = 0; i < sc.k; ++i) {
    for (int jj = 0; jj < sc.k; ++jj) {
      const Matrix block = matrix_from_json(blocks.at(i).at(jj));
      for (int s = 0; s < sc.d; ++s)
        for (int t = 0; t < sc.d; ++t) p.push_back(block(s, t));
    }
  }
  return Behavior(sc, std::move(p));
}

Anchor anchor_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind != "bob_less_alice" && kind != "alice_less_bob") throw std::invalid_argument("unknown anchor kind");
  return Anchor{kind == "bob_less_alice" ? AnchorKind::bob_less_alice : AnchorKind::alice_less_bob,
                j.at("index").get<int>()};
}

OptResult opt_result_from_json(const Json& j) {
  return OptResult{j.at("value").get<double>(),
                   state_from_json(j.at("state")),
                   family_from_json(j.at("family")),
                   j.at("residual").get<double>(),
                   j.at("restarts_used").get<int>(),
                   j.at("seed").get<std::uint64_t>(),
                   j.at("restart_values").get<std::vector<double>>()};
}

}  // namespace hardylab

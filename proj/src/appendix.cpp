#include "hardylab/appendix.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <initializer_list>
#include <stdexcept>

namespace hardylab {

namespace {

using Column = std::array<double, 3>;

Matrix from_columns(std::initializer_list<Column> cols) {
  Matrix m(3, static_cast<Eigen::Index>(cols.size()));
  Eigen::Index c = 0;
  for (const auto& col : cols) {
    for (int r = 0; r < 3; ++r) m(r, c) = col[r];
    ++c;
  }
  return m;
}

Matrix from_rows(std::initializer_list<Column> rows) { return from_columns(rows).transpose(); }

Matrix identity3() { return Matrix::Identity(3, 3); }

AppendixDataset three_settings() {
  AppendixDataset ds;
  ds.k = 3;
  ds.h = from_rows({{0.636671, 0.289003, 0.197472}, {0, 0.473914, 0.164544}, {0, 0, 0.469534}});
  ds.alice = {
      identity3(),
      from_columns({{0.840759, -0.512713, -0.173922}, {0.39627, 0.801645, -0.447589}, {0.368908, 0.307394, 0.877163}}),
      from_columns({{0.604857, -0.783492, -0.142437}, {-0.361768, -0.429694, 0.827337}, {0.709416, 0.448892, 0.543346}}),
  };
  ds.bob = {
      identity3(),
      from_columns({{-0.0700471, 0.0357429, 0.0138888}, {0.00836581, 0.021817, -0.0139536}, {0.125725, 0.13505, 0.286533}}),
      from_columns({{0.876299, 0.397777, 0.271796}, {-0.460165, 0.858127, 0.227742}, {0.142645, 0.324641, -0.935019}}),
  };
  ds.anchor = {AnchorKind::bob_less_alice, 2};
  ds.reported_success = 0.267769;
  return ds;
}

AppendixDataset four_settings() {
  AppendixDataset ds;
  ds.k = 4;
  ds.h = from_rows({{0.551527, -0.209186, 0.184342}, {0, 0.519748, -0.209186}, {0, 0, 0.551527}});
  ds.alice = {
      from_columns({{0.905512, -0.349204, 0.241051}, {-0.399076, -0.893898, 0.204168}, {0.144179, -0.281074, -0.948794}}),
      identity3(),
      from_columns({{0.914794, 0.368182, -0.166114}, {-0.272352, 0.865949, 0.419472}, {0.298288, -0.338489, 0.89244}}),
      from_columns({{0.800697, 0.573965, -0.171602}, {0.307453, -0.639559, -0.704583}, {0.514156, -0.511398, 0.68856}}),
  };
  ds.bob = {
      from_columns({{0.89244, -0.338489, 0.298288}, {0.419472, 0.865949, -0.272352}, {0.166114, -0.368182, -0.914794}}),
      identity3(),
      from_columns({{-0.948794, -0.281074, 0.144179}, {-0.204168, 0.893898, 0.399076}, {0.241051, -0.349204, 0.905512}}),
      from_columns({{0.68856, -0.511398, 0.514156}, {-0.704583, -0.639559, 0.307453}, {0.171602, -0.573965, -0.800697}}),
  };
  ds.anchor = {AnchorKind::bob_less_alice, 3};
  ds.reported_success = 0.348158;
  return ds;
}

AppendixDataset five_settings() {
  AppendixDataset ds;
  ds.k = 5;
  ds.h = from_rows({{0.560108, 0, 0}, {0.17891, 0.534063, 0}, {0.152703, 0.17891, 0.560108}});
  ds.alice = {
      from_columns({{0.749824, 0.477546, 0.457945}, {0.634354, -0.715587, -0.292456}, {0.188038, 0.50979, -0.839497}}),
      from_columns({{0.921999, 0.294506, 0.251365}, {-0.354751, 0.902659, 0.243634}, {0.155145, 0.313803, -0.936727}}),
      identity3(),
      from_columns({{-0.958481, 0.248819, 0.139295}, {0.187595, 0.918099, -0.349146}, {0.214761, 0.308518, 0.926658}}),
      from_columns({{0.898853, -0.40709, -0.162297}, {-0.251302, -0.782172, 0.570136}, {0.35904, 0.471683, 0.80536}}),
  };
  ds.bob = {
      from_columns({{0.926658, 0.308518, 0.214761}, {0.349146, -0.918099, -0.187595}, {0.139295, 0.248819, -0.958481}}),
      identity3(),
      from_columns({{0.936727, -0.313803, -0.155145}, {0.243634, 0.902659, -0.354751}, {0.251365, 0.294506, 0.921999}}),
      from_columns({{0.839497, -0.50979, -0.188038}, {-0.292456, -0.715587, 0.634354}, {0.457945, 0.477546, 0.749824}}),
      from_columns({{0.80536, 0.471683, 0.35904}, {0.570136, -0.782172, -0.251302}, {0.162297, 0.40709, -0.898853}}),
  };
  ds.anchor = {AnchorKind::alice_less_bob, 3};
  ds.reported_success = 0.40184;
  return ds;
}

Matrix normalize_columns(const Matrix& m) {
  Matrix out = m;
  for (Eigen::Index c = 0; c < out.cols(); ++c) out.col(c).normalize();
  return out;
}

double sign_free_gap(const Matrix& printed, const Matrix& derived) {
  double worst = 0.0;
  for (Eigen::Index c = 0; c < printed.cols(); ++c) {
    const double plus = (printed.col(c) - derived.col(c)).cwiseAbs().maxCoeff();
    const double minus = (printed.col(c) + derived.col(c)).cwiseAbs().maxCoeff();
    worst = std::max(worst, std::min(plus, minus));
  }
  return worst;
}

std::string constraint_label(const ZeroConstraint& c) {
  const std::string a = "A_" + std::to_string(c.alice_setting);
  const std::string b = "B_" + std::to_string(c.bob_setting);
  return c.alice_less ? "P(" + a + "<" + b + ")" : "P(" + b + "<" + a + ")";
}

}  // namespace

AppendixDataset AppendixDataset::load(int k) {
  switch (k) {
    case 3: return three_settings();
    case 4: return four_settings();
    case 5: return five_settings();
    default: throw std::invalid_argument("embedded measurements exist only for k = 3, 4, 5");
  }
}

AppendixReport verify_appendix(int k) {
  const AppendixDataset ds = AppendixDataset::load(k);
  const PureState state = normalize_state(ds.h);
  const ChainResult chain = propagate_chain(state, ds.anchor, Scenario(k, 3));

  AppendixReport rep;
  rep.k = k;
  rep.state_norm = ds.h.norm();
  rep.reported_success = ds.reported_success;

  auto check = [&](const std::string& name, const Matrix& printed, const Basis& derived) {
    BasisCheck bc;
    bc.name = name;
    bc.orthonormality = orthonormality_residual(printed);
    bc.column_norm_deviation = (printed.colwise().norm().array() - 1.0).abs().maxCoeff();
    bc.rederived_deviation = sign_free_gap(normalize_columns(printed), derived.u());
    rep.worst_orthonormality = std::max(rep.worst_orthonormality, bc.orthonormality);
    if (bc.orthonormality > 1e-4) rep.inconsistent_bases.push_back(name);
    rep.bases.push_back(bc);
  };
  for (int i = 0; i < k; ++i) check("A_" + std::to_string(i + 1), ds.alice[i], chain.family.alice[i]);
  for (int j = 0; j < k; ++j) check("B_" + std::to_string(j + 1), ds.bob[j], chain.family.bob[j]);

  const auto constraints = hardy_constraints(k);
  for (std::size_t n = 0; n < constraints.size(); ++n) {
    const auto& c = constraints[n];
    const Matrix a = normalize_columns(ds.alice[c.alice_setting - 1]);
    const Matrix b = normalize_columns(ds.bob[c.bob_setting - 1]);
    const double printed = c.alice_less ? prob_less_unchecked(state.h(), a, b) : prob_greater_unchecked(state.h(), a, b);
    rep.constraints.push_back({constraint_label(c), printed, chain.constraint_probs[n]});
    rep.printed_max_constraint = std::max(rep.printed_max_constraint, printed);
  }
  rep.rederived_max_constraint = chain.residual;
  rep.printed_success = prob_less_unchecked(state.h(), normalize_columns(ds.alice[k - 1]), normalize_columns(ds.bob[k - 1]));
  rep.rederived_success = chain.success;
  return rep;
}

Json to_json(const AppendixReport& r) {
  Json bases = Json::array();
  for (const auto& b : r.bases) {
    bases.push_back({{"basis", b.name},
                     {"orthonormality_residual", b.orthonormality},
                     {"column_norm_deviation", b.column_norm_deviation},
                     {"rederived_deviation", b.rederived_deviation}});
  }
  Json constraints = Json::array();
  for (const auto& c : r.constraints) {
    constraints.push_back({{"constraint", c.label}, {"printed", c.printed}, {"rederived", c.rederived}});
  }
  return {{"k", r.k},
          {"d", 3},
          {"printed_state_norm", r.state_norm},
          {"bases", std::move(bases)},
          {"constraints", std::move(constraints)},
          {"printed_success", r.printed_success},
          {"rederived_success", r.rederived_success},
          {"reported_success", r.reported_success},
          {"printed_max_constraint", r.printed_max_constraint},
          {"rederived_max_constraint", r.rederived_max_constraint},
          {"worst_orthonormality", r.worst_orthonormality},
          {"inconsistent_bases", r.inconsistent_bases}};
}

}  // namespace hardylab

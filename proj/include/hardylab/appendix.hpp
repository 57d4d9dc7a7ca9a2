#pragma once

// Published optimal two-qutrit states and measurements for k = 3, 4, 5,
// embedded digit-for-digit (six significant figures, not renormalized), and a
// verifier that compares them with the chain re-derived from the printed H.

#include "hardylab/chain.hpp"
#include "hardylab/json_io.hpp"
#include "hardylab/scenario.hpp"

#include <string>
#include <vector>

namespace hardylab {

struct AppendixDataset {
  int k = 3;
  Matrix h;                   // as printed
  std::vector<Matrix> alice;  // A_1..A_k, columns are the printed vectors
  std::vector<Matrix> bob;    // B_1..B_k
  Anchor anchor;              // computational pair used for the state
  double reported_success = 0.0;

  /// Throws std::invalid_argument unless k is 3, 4 or 5.
  static AppendixDataset load(int k);
};

struct BasisCheck {
  std::string name;      // e.g. "A_2"
  double orthonormality = 0.0;  // max |U^T U - I| of the printed vectors
  double column_norm_deviation = 0.0;  // max |‖u_s‖ - 1|
  double rederived_deviation = 0.0;    // max entry gap to the re-derived basis, up to column signs
};

struct ConstraintCheck {
  std::string label;    // e.g. "P(A_2<B_1)"
  double printed = 0.0;    // columns renormalized
  double rederived = 0.0;
};

struct AppendixReport {
  int k = 0;
  double state_norm = 0.0;  // Frobenius norm of the printed H
  std::vector<BasisCheck> bases;
  std::vector<ConstraintCheck> constraints;
  double printed_success = 0.0;
  double rederived_success = 0.0;
  double printed_max_constraint = 0.0;
  double rederived_max_constraint = 0.0;
  double reported_success = 0.0;
  double worst_orthonormality = 0.0;
  std::vector<std::string> inconsistent_bases;  // printed bases off by more than 1e-4
};

AppendixReport verify_appendix(int k);

Json to_json(const AppendixReport& report);

}  // namespace hardylab

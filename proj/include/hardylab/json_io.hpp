#pragma once

// JSON forms of the library types. Matrices are row-major arrays of rows;
// every document carries k and d explicitly where they apply.

#include "hardylab/chain.hpp"
#include "hardylab/inequality.hpp"
#include "hardylab/optimizer.hpp"
#include "hardylab/polytope.hpp"
#include "hardylab/scenario.hpp"

#include "json.hpp"

namespace hardylab {

using Json = nlohmann::json;

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json to_json(const Scenario& sc);
Json to_json(const PureState& state);
Json to_json(const Basis& basis);
Json to_json(const MeasurementFamily& fam);
Json to_json(const Behavior& behavior);
Json to_json(const Anchor& anchor);
Json to_json(const InequalityCoeffs& coeffs);
Json to_json(const ChainResult& chain);
Json to_json(const OptResult& result);
Json to_json(const TightnessCertificate& cert);

Scenario scenario_from_json(const Json& j);
PureState state_from_json(const Json& j);
Basis basis_from_json(const Json& j);
MeasurementFamily family_from_json(const Json& j);
Behavior behavior_from_json(const Json& j);
Anchor anchor_from_json(const Json& j);
OptResult opt_result_from_json(const Json& j);

}  // namespace hardylab

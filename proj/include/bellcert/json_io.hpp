#pragma once

#include <json.hpp>

#include "bellcert/certify.hpp"
#include "bellcert/optimize.hpp"

namespace bellcert {

using Json = nlohmann::json;

// Matrices travel as {"rows": n, "cols": m, "data": [[re, im], ...]} in
// row-major order; extra keys are ignored on read, non-finite entries and
// shape mismatches are schema errors.
Json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j);

// Matrix schema plus a "projective" flag; the flag is recomputed on read,
// never trusted.
Json observable_to_json(const BinaryObservable& a);
BinaryObservable observable_from_json(const Json& j);

Json state_to_json(const DensityMatrix& rho);
DensityMatrix state_from_json(const Json& j);

// {"family": "biased_chsh", "alpha": a} or {"family": "mabk", "n": n}.
// Dimensions are not part of the schema; readers take them from context.
Json scenario_to_json(const BellScenario& scenario);
BellScenario scenario_from_json(const Json& j, std::vector<Eigen::Index> party_dims);
int scenario_party_count(const Json& j);

// {"scenario": ..., "observables": [[A0, A1], ...], "state": ...}.
Json realization_to_json(const BellRealization& r);
BellRealization realization_from_json(const Json& j);

Json bound_check_to_json(const BoundCheckResult& r, bool include_witness = true);
Json extraction_to_json(const CanonicalFormResult& r, bool include_unitary);
Json rigidity_report_to_json(const RigidityReport& r, bool include_unitaries);
Json certification_report_to_json(const CertificationReport& r, bool include_unitaries);
Json seesaw_result_to_json(const SeesawResult& r);
Json falsify_report_to_json(const FalsifyReport& r);

}  // namespace bellcert

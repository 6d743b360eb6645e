#include "bellcert/json_io.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "bellcert/errors.hpp"

namespace bellcert {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw SchemaError(std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

double finite_number(const Json& j, const char* where) {
  if (!j.is_number()) {
    throw SchemaError(std::string(where) + ": expected a number");
  }
  double v = j.get<double>();
  if (!std::isfinite(v)) {
    throw SchemaError(std::string(where) + ": non-finite value");
  }
  return v;
}

Eigen::Index index_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) {
    throw SchemaError(std::string("field \"") + key + "\" must be an integer");
  }
  return v.get<Eigen::Index>();
}

}  // namespace

Json matrix_to_json(const CMatrix& m) {
  Json data = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      data.push_back({m(i, k).real(), m(i, k).imag()});
    }
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

CMatrix matrix_from_json(const Json& j) {
  Eigen::Index rows = index_field(j, "rows");
  Eigen::Index cols = index_field(j, "cols");
  if (rows <= 0 || cols <= 0) {
    throw SchemaError("matrix dimensions must be positive");
  }
  const Json& data = field(j, "data");
  if (!data.is_array() || static_cast<Eigen::Index>(data.size()) != rows * cols) {
    throw SchemaError("matrix data length does not match rows*cols");
  }
  CMatrix m(rows, cols);
  Eigen::Index flat = 0;
  for (const Json& entry : data) {
    if (!entry.is_array() || entry.size() != 2) {
      throw SchemaError("matrix entries must be [re, im] pairs");
    }
    double re = finite_number(entry[0], "matrix entry");
    double im = finite_number(entry[1], "matrix entry");
    m(flat / cols, flat % cols) = Complex(re, im);
    ++flat;
  }
  return m;
}

Json observable_to_json(const BinaryObservable& a) {
  Json j = matrix_to_json(a.matrix());
  j["projective"] = a.projective();
  return j;
}

BinaryObservable observable_from_json(const Json& j) {
  return BinaryObservable(matrix_from_json(j));
}

Json state_to_json(const DensityMatrix& rho) { return matrix_to_json(rho.matrix()); }

DensityMatrix state_from_json(const Json& j) { return DensityMatrix(matrix_from_json(j)); }

Json scenario_to_json(const BellScenario& scenario) {
  if (scenario.family() == BellFamily::kBiasedChsh) {
    return Json{{"family", "biased_chsh"}, {"alpha", scenario.alpha()}};
  }
  return Json{{"family", "mabk"}, {"n", scenario.parties()}};
}

BellScenario scenario_from_json(const Json& j, std::vector<Eigen::Index> party_dims) {
  const Json& fam = field(j, "family");
  if (!fam.is_string()) {
    throw SchemaError("scenario family must be a string");
  }
  std::string name = fam.get<std::string>();
  if (name == "biased_chsh") {
    return BellScenario::biased_chsh(finite_number(field(j, "alpha"), "alpha"),
                                     std::move(party_dims));
  }
  if (name == "mabk") {
    return BellScenario::mabk(static_cast<int>(index_field(j, "n")), std::move(party_dims));
  }
  throw SchemaError("unknown scenario family \"" + name + "\"");
}

int scenario_party_count(const Json& j) {
  const Json& fam = field(j, "family");
  if (!fam.is_string()) {
    throw SchemaError("scenario family must be a string");
  }
  std::string name = fam.get<std::string>();
  if (name == "biased_chsh") return 2;
  if (name == "mabk") return static_cast<int>(index_field(j, "n"));
  throw SchemaError("unknown scenario family \"" + name + "\"");
}

Json realization_to_json(const BellRealization& r) {
  Json parties = Json::array();
  for (const auto& pair : r.observables) {
    parties.push_back({observable_to_json(pair[0]), observable_to_json(pair[1])});
  }
  return Json{{"scenario", scenario_to_json(r.scenario)},
              {"observables", std::move(parties)},
              {"state", state_to_json(r.state)}};
}

BellRealization realization_from_json(const Json& j) {
  const Json& parties = field(j, "observables");
  if (!parties.is_array() || parties.empty()) {
    throw SchemaError("realization needs a non-empty observables array");
  }
  std::vector<std::array<BinaryObservable, 2>> obs;
  std::vector<Eigen::Index> dims;
  for (const Json& pair : parties) {
    if (!pair.is_array() || pair.size() != 2) {
      throw SchemaError("each party needs exactly two observables");
    }
    obs.push_back({observable_from_json(pair[0]), observable_from_json(pair[1])});
    dims.push_back(obs.back()[0].dim());
  }
  BellScenario scenario = scenario_from_json(field(j, "scenario"), std::move(dims));
  return BellRealization(std::move(scenario), std::move(obs),
                         state_from_json(field(j, "state")));
}

Json bound_check_to_json(const BoundCheckResult& r, bool include_witness) {
  Json j{{"lhs_max_eig", r.lhs_max_eig},
         {"gap_min_eig", r.gap_min_eig},
         {"passed", r.passed}};
  if (include_witness && r.witness_vector.size() > 0) {
    j["witness"] = matrix_to_json(r.witness_vector);
  }
  return j;
}

Json extraction_to_json(const CanonicalFormResult& r, bool include_unitary) {
  Json j{{"theta", r.theta},
         {"residual_a0", r.r0},
         {"residual_a1", r.r1},
         {"diagnostics",
          Json{{"projectivity_defect_a0", r.diagnostics.projectivity_defect_a0},
               {"projectivity_defect_a1", r.diagnostics.projectivity_defect_a1},
               {"anticom_positivity_defect", r.diagnostics.anticom_positivity_defect},
               {"commutator_modulus_defect", r.diagnostics.commutator_modulus_defect},
               {"trace_gap", r.diagnostics.trace_gap},
               {"holder_gap", r.diagnostics.holder_gap}}}};
  if (include_unitary) {
    j["unitary"] = matrix_to_json(r.unitary);
  }
  return j;
}

Json rigidity_report_to_json(const RigidityReport& r, bool include_unitaries) {
  Json extractions = Json::array();
  for (const CanonicalFormResult& e : r.party_extractions) {
    extractions.push_back(extraction_to_json(e, include_unitaries));
  }
  std::string structure =
      r.structure == IdealStructure::kMaximallyEntangled
          ? "maximally_entangled"
          : "GHZ(" + std::to_string(r.party_extractions.size()) + ")";
  return Json{{"beta", r.beta},
              {"top_eigenvalue", r.top_eigenvalue},
              {"degeneracy", r.degeneracy},
              {"extracted_state_overlap", r.extracted_state_overlap},
              {"structure", std::move(structure)},
              {"operator_mismatch", r.operator_mismatch},
              {"party_extractions", std::move(extractions)}};
}

Json certification_report_to_json(const CertificationReport& r, bool include_unitaries) {
  Json checks = Json::array();
  for (const NamedCheck& c : r.bound_checks) {
    Json entry = bound_check_to_json(c.result);
    entry["name"] = c.name;
    checks.push_back(std::move(entry));
  }
  Json j{{"beta", r.beta},
         {"classical_bound", r.bounds.classical},
         {"quantum_bound", r.bounds.quantum},
         {"t_values", r.t_values},
         {"t_probe", r.t_probe},
         {"tradeoff_cap", r.tradeoff_cap},
         {"bound_checks", std::move(checks)},
         {"state_full_rank", r.state_full_rank},
         {"certified", r.certified}};
  j["rigidity"] =
      r.rigidity ? rigidity_report_to_json(*r.rigidity, include_unitaries) : Json(nullptr);
  if (!r.certified) {
    j["failure"] = r.failure;
  }
  return j;
}

Json seesaw_result_to_json(const SeesawResult& r) {
  return Json{{"beta", r.beta},
              {"converged", r.converged},
              {"iterations", r.iterations},
              {"winning_seed", r.winning_seed},
              {"beta_trace", r.beta_trace},
              {"realization", realization_to_json(r.realization)}};
}

Json falsify_report_to_json(const FalsifyReport& r) {
  Json checks = Json::array();
  for (const FalsifyCheckStat& c : r.checks) {
    checks.push_back(Json{{"name", c.name},
                          {"runs", c.runs},
                          {"violations", c.violations},
                          {"worst_gap", c.worst_gap}});
  }
  return Json{{"seed", r.seed},
              {"samples", r.samples},
              {"checks", std::move(checks)},
              {"total_violations", r.total_violations},
              {"worst_gap", r.worst_gap},
              {"passed", r.total_violations == 0}};
}

}  // namespace bellcert

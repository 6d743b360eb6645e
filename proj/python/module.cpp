#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bellcert/certify.hpp"
#include "bellcert/optimize.hpp"

namespace py = pybind11;
using namespace bellcert;

namespace {

std::string family_name(const BellScenario& s) {
  return s.family() == BellFamily::kBiasedChsh ? "biased_chsh" : "mabk";
}

std::string structure_name(IdealStructure s) {
  return s == IdealStructure::kMaximallyEntangled ? "maximally_entangled" : "ghz";
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bell operator toolkit: family operators, operator bounds, canonical-form "
            "extraction, rigidity certification, and seesaw optimization";

  py::register_exception<SchemaError>(m, "SchemaError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<CertificationError>(m, "CertificationError", PyExc_RuntimeError);

  py::class_<BinaryObservable>(m, "BinaryObservable")
      .def(py::init<const CMatrix&>(), py::arg("matrix"))
      .def_property_readonly("matrix", &BinaryObservable::matrix,
                             py::return_value_policy::copy)
      .def_property_readonly("dim", &BinaryObservable::dim)
      .def_property_readonly("projective", &BinaryObservable::projective);

  py::class_<DensityMatrix>(m, "DensityMatrix")
      .def(py::init<const CMatrix&>(), py::arg("matrix"))
      .def_property_readonly("matrix", &DensityMatrix::matrix,
                             py::return_value_policy::copy)
      .def_property_readonly("dim", &DensityMatrix::dim)
      .def_property_readonly("min_eigenvalue", &DensityMatrix::min_eigenvalue)
      .def("full_rank", &DensityMatrix::full_rank, py::arg("rank_tol") = kRankTol);

  py::class_<BellScenario>(m, "Scenario")
      .def_static("biased_chsh", &BellScenario::biased_chsh, py::arg("alpha"),
                  py::arg("party_dims"))
      .def_static("mabk", &BellScenario::mabk, py::arg("parties"), py::arg("party_dims"))
      .def_property_readonly("family", &family_name)
      .def_property_readonly("alpha", &BellScenario::alpha)
      .def_property_readonly("parties", &BellScenario::parties)
      .def_property_readonly("party_dims", &BellScenario::party_dims)
      .def_property_readonly("joint_dim", &BellScenario::joint_dim);

  py::class_<BellRealization>(m, "Realization")
      .def(py::init<BellScenario, std::vector<std::array<BinaryObservable, 2>>,
                    DensityMatrix>(),
           py::arg("scenario"), py::arg("observables"), py::arg("state"))
      .def_readonly("scenario", &BellRealization::scenario)
      .def_readonly("observables", &BellRealization::observables)
      .def_readonly("state", &BellRealization::state);

  py::class_<BoundCheckResult>(m, "BoundCheck")
      .def_readonly("lhs_max_eig", &BoundCheckResult::lhs_max_eig)
      .def_readonly("gap_min_eig", &BoundCheckResult::gap_min_eig)
      .def_readonly("passed", &BoundCheckResult::passed);

  py::class_<MabkBoundChecks>(m, "MabkBoundChecks")
      .def_readonly("commutator_bound", &MabkBoundChecks::commutator_bound)
      .def_readonly("square_bound", &MabkBoundChecks::square_bound);

  py::class_<ExtractionDiagnostics>(m, "ExtractionDiagnostics")
      .def_readonly("projectivity_defect_a0", &ExtractionDiagnostics::projectivity_defect_a0)
      .def_readonly("projectivity_defect_a1", &ExtractionDiagnostics::projectivity_defect_a1)
      .def_readonly("anticom_positivity_defect",
                    &ExtractionDiagnostics::anticom_positivity_defect)
      .def_readonly("commutator_modulus_defect",
                    &ExtractionDiagnostics::commutator_modulus_defect)
      .def_readonly("trace_gap", &ExtractionDiagnostics::trace_gap)
      .def_readonly("holder_gap", &ExtractionDiagnostics::holder_gap);

  py::class_<CanonicalFormResult>(m, "CanonicalForm")
      .def_readonly("unitary", &CanonicalFormResult::unitary)
      .def_readonly("theta", &CanonicalFormResult::theta)
      .def_readonly("r0", &CanonicalFormResult::r0)
      .def_readonly("r1", &CanonicalFormResult::r1)
      .def_readonly("diagnostics", &CanonicalFormResult::diagnostics);

  py::class_<NAnticommutingResult>(m, "AnticommutingCertificate")
      .def_readonly("unitary", &NAnticommutingResult::unitary)
      .def_readonly("residuals", &NAnticommutingResult::residuals)
      .def_readonly("upsilon", &NAnticommutingResult::upsilon)
      .def_readonly("upsilon_projectivity_defect",
                    &NAnticommutingResult::upsilon_projectivity_defect);

  py::class_<RigidityReport>(m, "RigidityReport")
      .def_readonly("beta", &RigidityReport::beta)
      .def_readonly("top_eigenvalue", &RigidityReport::top_eigenvalue)
      .def_readonly("degeneracy", &RigidityReport::degeneracy)
      .def_readonly("extracted_state_overlap", &RigidityReport::extracted_state_overlap)
      .def_property_readonly("structure",
                             [](const RigidityReport& r) { return structure_name(r.structure); })
      .def_readonly("operator_mismatch", &RigidityReport::operator_mismatch)
      .def_readonly("party_extractions", &RigidityReport::party_extractions);

  py::class_<NamedCheck>(m, "NamedCheck")
      .def_readonly("name", &NamedCheck::name)
      .def_readonly("result", &NamedCheck::result);

  py::class_<BetaBounds>(m, "Bounds")
      .def_readonly("classical", &BetaBounds::classical)
      .def_readonly("quantum", &BetaBounds::quantum);

  py::class_<CertificationReport>(m, "CertificationReport")
      .def_readonly("beta", &CertificationReport::beta)
      .def_readonly("bounds", &CertificationReport::bounds)
      .def_readonly("t_values", &CertificationReport::t_values)
      .def_readonly("t_probe", &CertificationReport::t_probe)
      .def_readonly("tradeoff_cap", &CertificationReport::tradeoff_cap)
      .def_readonly("bound_checks", &CertificationReport::bound_checks)
      .def_readonly("state_full_rank", &CertificationReport::state_full_rank)
      .def_readonly("rigidity", &CertificationReport::rigidity)
      .def_readonly("certified", &CertificationReport::certified)
      .def_readonly("failure", &CertificationReport::failure);

  py::class_<SeesawConfig>(m, "SeesawConfig")
      .def(py::init<>())
      .def_readwrite("max_iterations", &SeesawConfig::max_iterations)
      .def_readwrite("convergence_tol", &SeesawConfig::convergence_tol)
      .def_readwrite("restarts", &SeesawConfig::restarts)
      .def_readwrite("seed", &SeesawConfig::seed);

  py::class_<SeesawResult>(m, "SeesawResult")
      .def_readonly("beta", &SeesawResult::beta)
      .def_readonly("converged", &SeesawResult::converged)
      .def_readonly("iterations", &SeesawResult::iterations)
      .def_readonly("winning_seed", &SeesawResult::winning_seed)
      .def_readonly("beta_trace", &SeesawResult::beta_trace)
      .def_readonly("realization", &SeesawResult::realization);

  py::class_<TradeoffCurve::Row>(m, "TradeoffRow")
      .def_readonly("gamma", &TradeoffCurve::Row::gamma)
      .def_readonly("t", &TradeoffCurve::Row::t)
      .def_readonly("beta", &TradeoffCurve::Row::beta)
      .def_readonly("bound", &TradeoffCurve::Row::bound);

  py::class_<TradeoffCurve>(m, "TradeoffCurve")
      .def_readonly("rows", &TradeoffCurve::rows)
      .def("to_csv", &TradeoffCurve::to_csv);

  py::class_<FalsifyCheckStat>(m, "FalsifyCheckStat")
      .def_readonly("name", &FalsifyCheckStat::name)
      .def_readonly("runs", &FalsifyCheckStat::runs)
      .def_readonly("violations", &FalsifyCheckStat::violations)
      .def_readonly("worst_gap", &FalsifyCheckStat::worst_gap);

  py::class_<FalsifyReport>(m, "FalsifyReport")
      .def_readonly("seed", &FalsifyReport::seed)
      .def_readonly("samples", &FalsifyReport::samples)
      .def_readonly("checks", &FalsifyReport::checks)
      .def_readonly("total_violations", &FalsifyReport::total_violations)
      .def_readonly("worst_gap", &FalsifyReport::worst_gap);

  m.def(
      "chsh_operator",
      [](const BinaryObservable& a0, const BinaryObservable& a1, const BinaryObservable& b0,
         const BinaryObservable& b1, double alpha) {
        return build_chsh_alpha(a0, a1, b0, b1, alpha).matrix();
      },
      py::arg("a0"), py::arg("a1"), py::arg("b0"), py::arg("b1"), py::arg("alpha") = 1.0,
      "alpha (A0 + A1) x B0 + (A0 - A1) x B1");
  m.def(
      "mabk_operator",
      [](const std::vector<std::array<BinaryObservable, 2>>& obs) {
        return build_mabk(obs).matrix();
      },
      py::arg("observables"), "n-party parity-family operator");
  m.def(
      "bell_operator",
      [](const BellRealization& r) { return build_bell_operator(r).matrix(); },
      py::arg("realization"));
  m.def(
      "bell_value",
      [](const CMatrix& w, const DensityMatrix& rho) {
        return bell_value(HermitianMatrix(w), rho);
      },
      py::arg("operator"), py::arg("state"));

  m.def("effective_commutator", &effective_commutator, py::arg("a0"), py::arg("a1"),
        py::arg("state"));
  m.def("t_alpha", &t_alpha, py::arg("a0"), py::arg("a1"), py::arg("state"), py::arg("alpha"));
  m.def(
      "com_anticom_gap",
      [](const BinaryObservable& a0, const BinaryObservable& a1) {
        return com_anticom_gap(a0, a1).matrix();
      },
      py::arg("a0"), py::arg("a1"),
      "4 - |{A0,A1}|^2 - |[A0,A1]|^2, zero exactly for projective pairs");

  m.def(
      "matrix_modulus", [](const CMatrix& x) { return matrix_modulus(x).matrix(); },
      py::arg("x"), "PSD square root of X^dagger X");
  m.def(
      "operator_sqrt", [](const CMatrix& x) { return operator_sqrt(HermitianMatrix(x)).matrix(); },
      py::arg("x"));
  m.def("partial_trace", &partial_trace, py::arg("matrix"), py::arg("dims"), py::arg("keep"));
  m.def("op_norm", &op_norm, py::arg("matrix"));

  m.def(
      "bounds", [](const BellScenario& s) { return quantum_classical_bounds(s); },
      py::arg("scenario"), "classical and quantum values of the family");
  m.def("tradeoff_bound", &tradeoff_bound, py::arg("scenario"), py::arg("t"));

  m.def("verify_chsh_squared_bound", &verify_chsh_squared_bound, py::arg("a0"), py::arg("a1"),
        py::arg("b0"), py::arg("b1"), py::arg("alpha"), py::arg("tol") = kPsdTol);
  m.def("verify_talpha_bound", &verify_talpha_bound, py::arg("a0"), py::arg("a1"),
        py::arg("alpha"), py::arg("tol") = kPsdTol);
  m.def("verify_mabk_bounds", &verify_mabk_bounds, py::arg("observables"),
        py::arg("tol") = kPsdTol);
  m.def(
      "mabk_square_projective",
      [](const std::vector<std::array<BinaryObservable, 2>>& obs) {
        return mabk_square_projective(obs).matrix();
      },
      py::arg("observables"));

  m.def("extract_canonical_pair", &extract_canonical_pair, py::arg("a0"), py::arg("a1"),
        py::arg("state"), py::arg("alpha"), py::arg("tol") = kPsdTol);
  m.def("certify_n_anticommuting", &certify_n_anticommuting, py::arg("observables"),
        py::arg("state"), py::arg("tol") = kPsdTol);
  m.def("check_rigidity", &check_rigidity, py::arg("realization"), py::arg("tol") = kPsdTol);
  m.def("certification_report", &build_certification_report, py::arg("realization"),
        py::arg("tol") = kPsdTol);

  m.def("seesaw_max_violation", &seesaw_max_violation, py::arg("scenario"), py::arg("dims"),
        py::arg("config"));
  m.def("scan_tradeoff", &scan_tradeoff, py::arg("scenario"), py::arg("party_index"),
        py::arg("gamma_grid"));
  m.def("falsify_bounds", &falsify_bounds, py::arg("scenario"), py::arg("samples"),
        py::arg("dims"), py::arg("seed"));

  m.def(
      "random_binary_observable",
      [](Eigen::Index dim, bool projective, std::uint64_t seed) {
        SplitMix64 rng(seed);
        return random_binary_observable(dim, projective, rng);
      },
      py::arg("dim"), py::arg("projective"), py::arg("seed"));
  m.def(
      "random_density_matrix",
      [](Eigen::Index dim, std::uint64_t seed) {
        SplitMix64 rng(seed);
        return random_density_matrix(dim, rng);
      },
      py::arg("dim"), py::arg("seed"));
  m.def(
      "haar_unitary",
      [](Eigen::Index dim, std::uint64_t seed) {
        SplitMix64 rng(seed);
        return haar_unitary(dim, rng);
      },
      py::arg("dim"), py::arg("seed"));
}

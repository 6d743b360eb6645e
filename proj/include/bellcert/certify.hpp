#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bellcert/bell.hpp"

namespace bellcert {

struct ExtractionDiagnostics {
  double projectivity_defect_a0 = 0.0;  // ||A0^2 - 1||_op
  double projectivity_defect_a1 = 0.0;
  double anticom_positivity_defect = 0.0;   // max(0, -lambda_min({A0,A1}))
  double commutator_modulus_defect = 0.0;   // |||[A0,A1]| - 4a/(a^2+1) 1||_op
  double trace_gap = 0.0;   // 2(a^2+1) - tr(T_alpha rho)
  double holder_gap = 0.0;  // ||2(a^2+1) 1 - T_alpha||_op
};

struct CanonicalFormResult {
  CMatrix unitary;  // U_A with A0 = U_A (sigma_x x 1) U_A^dagger
  double theta = 0.0;  // in (0, pi/2]; arccos((a^2-1)/(a^2+1)) for exact inputs
  double r0 = 0.0;  // ||U_A^dagger A0 U_A - sigma_x x 1||_op
  double r1 = 0.0;  // ||U_A^dagger A1 U_A - (cos(theta) sigma_x + sin(theta) sigma_y) x 1||_op
  ExtractionDiagnostics diagnostics;
};

// Turns a near-maximal trade-off certificate tr(T_alpha rho) ~ 2(alpha^2+1)
// into an explicit local unitary putting (A0, A1) into the canonical
// anticommuting-pair form on qubit x register. Steps: saturation check,
// commutator eigenspaces P+/P-, basis pairing e1_j = A0 e0_j, block
// decomposition over the qubit factor, simultaneous diagonalization of the
// commuting (K_x, K_y), controlled phase correction, consistency checks on
// the second observable's blocks.
CanonicalFormResult extract_canonical_pair(const BinaryObservable& a0,
                                           const BinaryObservable& a1,
                                           const DensityMatrix& rho, double alpha,
                                           double tol = kPsdTol);

struct NAnticommutingResult {
  CMatrix unitary;  // U with A_j = U canonical_j U^dagger
  std::vector<double> residuals;  // ||U^dagger A_j U - canonical_j||_op per observable
  std::optional<CMatrix> upsilon;  // trailing register observable, odd n only
  double upsilon_projectivity_defect = 0.0;  // ||Y^2 - 1||_op, odd n only
};

// Certifies n observables pairwise maximally non-commuting on rho and builds
// the rotation to the canonical chain sigma_z^{floor(j/2)} x sigma_{x|y} x 1;
// for odd n the last observable maps to sigma_z^{(n-1)/2} x Y with Y
// projective but otherwise unconstrained (Y and -Y are indistinguishable).
NAnticommutingResult certify_n_anticommuting(const std::vector<BinaryObservable>& observables,
                                             const DensityMatrix& rho,
                                             double tol = kPsdTol);

enum class IdealStructure { kMaximallyEntangled, kGhz };

struct RigidityReport {
  double beta = 0.0;           // measured Bell value
  double top_eigenvalue = 0.0; // of the ideal qubit-block operator
  int degeneracy = 0;          // eigenvalues within kClusterTol of the top
  double extracted_state_overlap = 0.0;  // with the ideal top eigenvector
  IdealStructure structure = IdealStructure::kMaximallyEntangled;
  double operator_mismatch = 0.0;  // ||U^dagger W U - ideal padded||_op
  std::vector<CanonicalFormResult> party_extractions;
};

// For a realization within tol of the quantum maximum: extracts every party's
// canonical pair, verifies the jointly rotated operator equals the ideal
// qubit operator padded with identities, and reports the overlap of the
// rotated state (padding registers traced out) with the ideal top eigenvector
// - maximally entangled for the two-party family, GHZ for MABK.
RigidityReport check_rigidity(const BellRealization& realization, double tol = kPsdTol);

struct NamedCheck {
  std::string name;
  BoundCheckResult result;
};

// Everything the certification front end emits: the measured value against
// the family bounds, per-party commutator strengths, the operator
// inequalities, and - when the value is near-maximal - the rigidity analysis.
struct CertificationReport {
  double beta = 0.0;
  BetaBounds bounds;
  std::vector<double> t_values;  // unclamped per-party commutator strength
  double t_probe = 0.0;          // trade-off argument: t_alpha, or min over parties
  double tradeoff_cap = 0.0;     // largest value compatible with t_probe
  std::vector<NamedCheck> bound_checks;
  bool state_full_rank = true;
  std::optional<RigidityReport> rigidity;
  bool certified = false;
  std::string failure;  // first gate that failed, empty when certified
};

// Runs every check applicable to the realization's family. Structural gates
// (residuals, overlap) failing leave a report with certified = false; inputs
// that are not even near-maximal are a precondition error instead.
CertificationReport build_certification_report(const BellRealization& realization,
                                               double tol = kPsdTol);

}  // namespace bellcert

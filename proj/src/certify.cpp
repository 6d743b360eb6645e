#include "bellcert/certify.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace bellcert {

namespace {

constexpr double kEps = 2.220446049250313e-16;

struct QubitBlocks {
  CMatrix k0, kx, ky, kz;  // coefficients of 1, sigma_x, sigma_y, sigma_z
};

// m acts on C^2 (x) C^half with the qubit on the most significant index.
QubitBlocks qubit_blocks(const CMatrix& m) {
  Eigen::Index half = m.rows() / 2;
  CMatrix b00 = m.topLeftCorner(half, half);
  CMatrix b01 = m.topRightCorner(half, half);
  CMatrix b10 = m.bottomLeftCorner(half, half);
  CMatrix b11 = m.bottomRightCorner(half, half);
  QubitBlocks blocks;
  blocks.k0 = 0.5 * (b00 + b11);
  blocks.kz = 0.5 * (b00 - b11);
  blocks.kx = 0.5 * (b01 + b10);
  blocks.ky = Complex(0, 0.5) * (b01 - b10);
  return blocks;
}

// Modified Gram-Schmidt in column order, so drift is absorbed by later
// columns and the paired structure of the early ones survives.
void orthonormalize_columns(CMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      m.col(j) -= m.col(i).dot(m.col(j)) * m.col(i);
    }
    double nrm = m.col(j).norm();
    if (nrm < 1e-12) {
      throw CertificationError("extract_canonical_pair: basis pairing collapsed a column");
    }
    m.col(j) /= nrm;
  }
}

// Common orthonormal eigenbasis of a commuting Hermitian pair: diagonalize kx,
// then ky compressed onto each degenerate kx cluster.
CMatrix simultaneous_eigenbasis(const CMatrix& kx, const CMatrix& ky) {
  EigDecomposition ex = eig_hermitian(HermitianMatrix(kx));
  CMatrix v = ex.eigenvectors;
  for (auto [begin, end] : eigenvalue_clusters(ex.eigenvalues)) {
    Eigen::Index len = end - begin;
    if (len == 1) continue;
    CMatrix block = v.middleCols(begin, len);
    CMatrix sub = block.adjoint() * ky * block;
    EigDecomposition ey = eig_hermitian(HermitianMatrix(0.5 * (sub + sub.adjoint())));
    v.middleCols(begin, len) = block * ey.eigenvectors;
  }
  return v;
}

}  // namespace

CanonicalFormResult extract_canonical_pair(const BinaryObservable& a0,
                                           const BinaryObservable& a1,
                                           const DensityMatrix& rho, double alpha,
                                           double tol) {
  if (a0.dim() != a1.dim() || a0.dim() != rho.dim()) {
    throw DimensionError("extract_canonical_pair: observable/state dimensions differ");
  }
  if (!(alpha >= 1.0)) {
    throw PreconditionError("extract_canonical_pair: alpha must be >= 1");
  }
  if (!(tol > 0.0)) {
    throw PreconditionError("extract_canonical_pair: tol must be positive");
  }
  const Eigen::Index d = a0.dim();
  if (d % 2 != 0) {
    throw DimensionError(
        "extract_canonical_pair: odd dimension, the commutator eigenspaces cannot "
        "have equal rank");
  }
  if (!rho.full_rank()) {
    throw PreconditionError("extract_canonical_pair: state is rank-deficient");
  }
  const Eigen::Index m = d / 2;
  const double cap = 2.0 * (alpha * alpha + 1.0);

  // Saturation: the certificate operator must average to its largest possible
  // value, which (rho being full-rank) pins it to cap * identity.
  HermitianMatrix t_op = t_alpha_operator(a0, a1, alpha);
  double trace_gap = cap - (t_op.matrix() * rho.matrix()).trace().real();
  if (trace_gap > tol) {
    throw PreconditionError("extract_canonical_pair: certificate trace gap " +
                            std::to_string(trace_gap) + " exceeds tol " +
                            std::to_string(tol) + "; input is not near-maximal");
  }
  double holder_gap = op_norm(cap * identity(d) - t_op.matrix());

  ExtractionDiagnostics diag;
  diag.trace_gap = trace_gap;
  diag.holder_gap = holder_gap;
  diag.projectivity_defect_a0 = op_norm(a0.matrix() * a0.matrix() - identity(d));
  diag.projectivity_defect_a1 = op_norm(a1.matrix() * a1.matrix() - identity(d));

  CMatrix anti = a0.matrix() * a1.matrix() + a1.matrix() * a0.matrix();
  EigDecomposition anti_eig = eig_hermitian(HermitianMatrix(anti));
  diag.anticom_positivity_defect = std::max(0.0, -anti_eig.eigenvalues[0]);

  CMatrix comm = a0.matrix() * a1.matrix() - a1.matrix() * a0.matrix();
  const double c_alpha = 4.0 * alpha / (alpha * alpha + 1.0);
  diag.commutator_modulus_defect =
      op_norm(matrix_modulus(comm).matrix() - c_alpha * identity(d));

  // Commutator eigenspaces: -i[A0,A1] is Hermitian with spectrum clustering
  // at +/- c_alpha. P+ is taken at the positive cluster, which orients the
  // rotated commutator to +c_alpha i sigma_z x 1 and puts theta in (0, pi/2].
  EigDecomposition h_eig = eig_hermitian(HermitianMatrix(Complex(0, -1) * comm));
  Eigen::Index n_pos = 0, n_neg = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    double mu = h_eig.eigenvalues[i] / c_alpha;
    if (std::abs(mu - 1.0) <= tol) {
      ++n_pos;
    } else if (std::abs(mu + 1.0) <= tol) {
      ++n_neg;
    } else {
      throw PreconditionError(
          "extract_canonical_pair: scaled commutator eigenvalue " + std::to_string(mu) +
          " is not within tol of +/-1");
    }
  }
  if (n_pos != m || n_neg != m) {
    throw PreconditionError("extract_canonical_pair: commutator eigenspaces have ranks " +
                            std::to_string(n_pos) + "/" + std::to_string(n_neg) +
                            ", expected equal split");
  }

  // Basis pairing e1_j = A0 e0_j; eigenvalues ascend, so the positive cluster
  // occupies the trailing columns.
  CMatrix basis(d, d);
  basis.leftCols(m) = h_eig.eigenvectors.rightCols(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    basis.col(m + j) = a0.matrix() * basis.col(j);
  }
  orthonormalize_columns(basis);
  CMatrix u0 = basis.adjoint();  // e0_j -> |0 j>, e1_j -> |1 j>

  // Register rotation: diagonalize the commuting block pair of the rotated A0
  // and fold it into U0, leaving gamma_j on the diagonals.
  CMatrix a0_rot = u0 * a0.matrix() * u0.adjoint();
  QubitBlocks blk0 = qubit_blocks(a0_rot);
  CMatrix v = simultaneous_eigenbasis(blk0.kx, blk0.ky);
  CMatrix iv = kron(identity(2), v);
  u0 = iv.adjoint() * u0;
  a0_rot = iv.adjoint() * a0_rot * iv;
  blk0 = qubit_blocks(a0_rot);

  CMatrix u1 = CMatrix::Zero(d, d);
  for (Eigen::Index j = 0; j < m; ++j) {
    double gamma = std::atan2(blk0.ky(j, j).real(), blk0.kx(j, j).real());
    if (gamma < 0.0) gamma += 2.0 * M_PI;  // branch fixed to [0, 2pi)
    u1(j, j) = std::polar(1.0, 0.5 * gamma);
    u1(m + j, m + j) = std::polar(1.0, -0.5 * gamma);
  }

  CMatrix to_canonical = u1 * u0;
  CanonicalFormResult result;
  result.unitary = to_canonical.adjoint();  // A0 = U_A (sigma_x x 1) U_A^dagger
  result.diagnostics = diag;

  // Block constants of the second observable fix theta; consistency with the
  // commutator orientation makes sin(theta) positive.
  CMatrix a1_fin = to_canonical * a1.matrix() * to_canonical.adjoint();
  QubitBlocks blk1 = qubit_blocks(a1_fin);
  double mean_x = blk1.kx.trace().real() / static_cast<double>(m);
  double mean_y = blk1.ky.trace().real() / static_cast<double>(m);
  double theta = std::atan2(mean_y, mean_x);

  double resid_limit = 10.0 * std::sqrt(std::max(holder_gap, 0.0) + 64.0 * kEps);
  if (theta <= 0.0) {
    throw CertificationError("extract_canonical_pair: extracted angle " +
                             std::to_string(theta) + " is not in (0, pi/2]");
  }
  if (theta > M_PI_2) {
    if (theta > M_PI_2 + resid_limit) {
      throw CertificationError("extract_canonical_pair: extracted angle " +
                               std::to_string(theta) + " is not in (0, pi/2]");
    }
    theta = M_PI_2;
  }
  result.theta = theta;

  CMatrix a0_fin = to_canonical * a0.matrix() * to_canonical.adjoint();
  CMatrix target0 = kron(pauli_x(), identity(m));
  CMatrix target1 =
      kron(std::cos(theta) * pauli_x() + std::sin(theta) * pauli_y(), identity(m));
  result.r0 = op_norm(a0_fin - target0);
  result.r1 = op_norm(a1_fin - target1);

  // Engineering residual gate: first-order perturbation of the eigenspaces
  // scales with the operator gap, defect growth with its square root.
  if (result.r0 > resid_limit || result.r1 > resid_limit) {
    throw CertificationError("extract_canonical_pair: residuals (" +
                             std::to_string(result.r0) + ", " + std::to_string(result.r1) +
                             ") exceed the guarantee bound " + std::to_string(resid_limit));
  }
  return result;
}

namespace {

// Peels two observables per level: extract the canonical pair, then every
// remaining observable anticommutes with both canonical generators, which
// kills its identity/sigma_x/sigma_y blocks and leaves sigma_z x K. Recurse
// on the K's against the register-reduced state.
CMatrix certify_worker(std::vector<BinaryObservable> obs, const DensityMatrix& rho,
                       double tol, std::optional<CMatrix>& upsilon) {
  const Eigen::Index d = rho.dim();
  if (obs.size() <= 1) {
    if (obs.size() == 1) upsilon = obs[0].matrix();
    return identity(d);
  }
  for (std::size_t j = 0; j < obs.size(); ++j) {
    for (std::size_t k = j + 1; k < obs.size(); ++k) {
      double t = effective_commutator_raw(obs[j], obs[k], rho);
      if (t < 1.0 - tol) {
        throw PreconditionError("certify_n_anticommuting: pairwise commutator strength " +
                                std::to_string(t) + " of observables " + std::to_string(j) +
                                "," + std::to_string(k) + " is below 1 - tol");
      }
    }
  }
  // t >= 1 - tol matches a certificate trace gap of 4 (1 - t) <= 4 tol
  CanonicalFormResult pair = extract_canonical_pair(obs[0], obs[1], rho, 1.0, 4.0 * tol);
  CMatrix to_canonical = pair.unitary.adjoint();
  const Eigen::Index m = d / 2;

  std::vector<BinaryObservable> regs;
  regs.reserve(obs.size() - 2);
  for (std::size_t j = 2; j < obs.size(); ++j) {
    CMatrix rot = to_canonical * obs[j].matrix() * to_canonical.adjoint();
    QubitBlocks blk = qubit_blocks(rot);
    regs.emplace_back(CMatrix(0.5 * (blk.kz + blk.kz.adjoint())));
  }

  CMatrix rho_rot = to_canonical * rho.matrix() * to_canonical.adjoint();
  CMatrix rho_reg = partial_trace(rho_rot, {2, m}, {1});
  rho_reg = 0.5 * (rho_reg + rho_reg.adjoint());
  rho_reg /= rho_reg.trace().real();

  CMatrix v = certify_worker(std::move(regs), DensityMatrix(rho_reg), tol, upsilon);
  return pair.unitary * kron(identity(2), v);
}

}  // namespace

NAnticommutingResult certify_n_anticommuting(const std::vector<BinaryObservable>& observables,
                                             const DensityMatrix& rho, double tol) {
  if (observables.empty()) {
    throw PreconditionError("certify_n_anticommuting: no observables");
  }
  const Eigen::Index d = rho.dim();
  for (const BinaryObservable& a : observables) {
    if (a.dim() != d) {
      throw DimensionError("certify_n_anticommuting: observable/state dimensions differ");
    }
  }
  const int n = static_cast<int>(observables.size());
  const Eigen::Index block = Eigen::Index(1) << (n / 2);
  if (d % block != 0) {
    throw DimensionError("certify_n_anticommuting: dimension " + std::to_string(d) +
                         " is not divisible by 2^floor(n/2) = " + std::to_string(block));
  }

  NAnticommutingResult result;
  std::optional<CMatrix> upsilon;
  result.unitary = certify_worker(observables, rho, tol, upsilon);
  CMatrix to_canonical = result.unitary.adjoint();

  for (int j = 0; j < n; ++j) {
    std::vector<CMatrix> factors;
    bool trailing = (n % 2 == 1) && (j == n - 1);
    int z_count = trailing ? (n - 1) / 2 : j / 2;
    Eigen::Index rest = d;
    for (int p = 0; p < z_count; ++p) {
      factors.push_back(pauli_z());
      rest /= 2;
    }
    if (trailing) {
      factors.push_back(*upsilon);
    } else {
      factors.push_back(j % 2 == 0 ? pauli_x() : pauli_y());
      rest /= 2;
      factors.push_back(identity(rest));
    }
    CMatrix target = kron_list(factors);
    CMatrix rotated = to_canonical * observables[j].matrix() * result.unitary;
    result.residuals.push_back(op_norm(rotated - target));
  }

  if (n % 2 == 1) {
    result.upsilon = upsilon;
    result.upsilon_projectivity_defect =
        op_norm((*upsilon) * (*upsilon) - identity(upsilon->rows()));
  }
  return result;
}

RigidityReport check_rigidity(const BellRealization& realization, double tol) {
  const BellScenario& scenario = realization.scenario;
  HermitianMatrix w = build_bell_operator(realization);
  double beta = bell_value(w, realization.state);
  BetaBounds bounds = quantum_classical_bounds(scenario);
  if (beta < bounds.quantum - tol) {
    throw PreconditionError("check_rigidity: Bell value " + std::to_string(beta) +
                            " is not within tol of the quantum maximum " +
                            std::to_string(bounds.quantum));
  }

  const bool chsh = scenario.family() == BellFamily::kBiasedChsh;
  const auto& dims = scenario.party_dims();
  const int n = scenario.parties();

  RigidityReport report;
  report.beta = beta;
  report.structure = chsh ? IdealStructure::kMaximallyEntangled : IdealStructure::kGhz;

  // Per-party saturation slack from inverting the trade-off at beta_Q - tol.
  double slack = chsh ? 2.0 * bounds.quantum * tol + 1e-12
                      : 8.0 * bounds.quantum * tol / std::exp2(n - 2) + 1e-12;

  std::vector<CMatrix> unitaries;
  std::vector<std::array<BinaryObservable, 2>> ideal_padded, ideal_qubit;
  for (int k = 0; k < n; ++k) {
    CMatrix reduced = partial_trace(realization.state.matrix(), dims, {k});
    DensityMatrix state_k(0.5 * (reduced + reduced.adjoint()));
    double alpha_k = (chsh && k == 0) ? scenario.alpha() : 1.0;
    CanonicalFormResult ext =
        extract_canonical_pair(realization.observables[k][0], realization.observables[k][1],
                               state_k, alpha_k, slack);
    unitaries.push_back(ext.unitary);
    report.party_extractions.push_back(std::move(ext));

    double theta_k =
        std::acos((alpha_k * alpha_k - 1.0) / (alpha_k * alpha_k + 1.0));
    CMatrix ideal0 = pauli_x();
    CMatrix ideal1 = std::cos(theta_k) * pauli_x() + std::sin(theta_k) * pauli_y();
    Eigen::Index mk = dims[k] / 2;
    ideal_qubit.push_back({BinaryObservable(ideal0), BinaryObservable(ideal1)});
    ideal_padded.push_back({BinaryObservable(kron(ideal0, identity(mk))),
                            BinaryObservable(kron(ideal1, identity(mk)))});
  }

  CMatrix u_joint = kron_list(unitaries);
  CMatrix w_rot = u_joint.adjoint() * w.matrix() * u_joint;
  HermitianMatrix w_ideal_padded =
      chsh ? build_chsh_alpha(ideal_padded[0][0], ideal_padded[0][1], ideal_padded[1][0],
                              ideal_padded[1][1], scenario.alpha())
           : build_mabk(ideal_padded);
  report.operator_mismatch = op_norm(w_rot - w_ideal_padded.matrix());

  HermitianMatrix w_small =
      chsh ? build_chsh_alpha(ideal_qubit[0][0], ideal_qubit[0][1], ideal_qubit[1][0],
                              ideal_qubit[1][1], scenario.alpha())
           : build_mabk(ideal_qubit);
  EigDecomposition small_eig = eig_hermitian(w_small);
  Eigen::Index last = small_eig.eigenvalues.size() - 1;
  report.top_eigenvalue = small_eig.eigenvalues[last];
  auto clusters = eigenvalue_clusters(small_eig.eigenvalues);
  report.degeneracy = static_cast<int>(clusters.back().second - clusters.back().first);
  CVector phi = small_eig.eigenvectors.col(last);

  // Trace out the per-party padding registers of the rotated state and take
  // the overlap with the ideal top eigenvector.
  CMatrix rho_rot = u_joint.adjoint() * realization.state.matrix() * u_joint;
  std::vector<Eigen::Index> fine_dims;
  std::vector<int> keep;
  for (int k = 0; k < n; ++k) {
    keep.push_back(static_cast<int>(fine_dims.size()));
    fine_dims.push_back(2);
    fine_dims.push_back(dims[k] / 2);
  }
  CMatrix rho_qubits = partial_trace(rho_rot, fine_dims, keep);
  double overlap = phi.dot(rho_qubits * phi).real();
  report.extracted_state_overlap = std::clamp(overlap, 0.0, 1.0);
  return report;
}

CertificationReport build_certification_report(const BellRealization& realization,
                                               double tol) {
  const BellScenario& scenario = realization.scenario;
  const bool chsh = scenario.family() == BellFamily::kBiasedChsh;
  const auto& dims = scenario.party_dims();
  const int n = scenario.parties();

  CertificationReport report;
  HermitianMatrix w = build_bell_operator(realization);
  report.beta = bell_value(w, realization.state);
  report.bounds = quantum_classical_bounds(scenario);
  report.state_full_rank = realization.state.full_rank();

  std::vector<DensityMatrix> reduced;
  for (int k = 0; k < n; ++k) {
    CMatrix r = partial_trace(realization.state.matrix(), dims, {k});
    reduced.emplace_back(CMatrix(0.5 * (r + r.adjoint())));
    report.t_values.push_back(effective_commutator_raw(
        realization.observables[k][0], realization.observables[k][1], reduced.back()));
  }
  if (chsh) {
    report.t_probe = t_alpha(realization.observables[0][0], realization.observables[0][1],
                             reduced[0], scenario.alpha());
  } else {
    report.t_probe = *std::min_element(report.t_values.begin(), report.t_values.end());
  }
  // Raw t goes in the report, the bound formula gets the clamped value.
  double t_clamped = std::min(report.t_probe, 1.0);
  if (!chsh) t_clamped = std::max(t_clamped, 0.0);
  report.tradeoff_cap = tradeoff_bound(scenario, t_clamped);

  if (chsh) {
    const auto& a = realization.observables[0];
    const auto& b = realization.observables[1];
    report.bound_checks.push_back(
        {"chsh_squared_bound",
         verify_chsh_squared_bound(a[0], a[1], b[0], b[1], scenario.alpha(), tol)});
    report.bound_checks.push_back(
        {"talpha_bound", verify_talpha_bound(a[0], a[1], scenario.alpha(), tol)});
  } else {
    MabkBoundChecks mabk = verify_mabk_bounds(realization.observables, tol);
    report.bound_checks.push_back({"mabk_commutator_bound", mabk.commutator_bound});
    report.bound_checks.push_back({"mabk_square_bound", mabk.square_bound});
  }
  bool checks_ok = true;
  for (const NamedCheck& c : report.bound_checks) checks_ok = checks_ok && c.result.passed;
  bool tradeoff_ok =
      report.beta <= report.tradeoff_cap + 10.0 * tol * std::max(1.0, report.bounds.quantum);

  try {
    report.rigidity = check_rigidity(realization, tol);
    report.certified = checks_ok && tradeoff_ok;
    if (!report.certified) {
      report.failure =
          checks_ok ? "measured value exceeds the trade-off cap" : "operator bound check failed";
    }
  } catch (const CertificationError& e) {
    report.certified = false;
    report.failure = e.what();
  }
  return report;
}

}  // namespace bellcert

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "bellcert/errors.hpp"

namespace bellcert {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Shared numerical tolerances. Hermiticity is entrywise absolute; PSD checks
// allow eigenvalues down to -kPsdTol; eigendecompositions must reconstruct
// within kReconstructTol in relative Frobenius norm.
inline constexpr double kHermTol = 1e-10;
inline constexpr double kPsdTol = 1e-8;
inline constexpr double kReconstructTol = 1e-9;
inline constexpr double kClusterTol = 1e-9;  // degenerate-eigenvalue grouping
inline constexpr double kRankTol = 1e-10;    // full-rank threshold for states
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kProjectiveTol = 1e-8;  // ||A^2 - 1||_op for the flag

// Square matrix validated Hermitian within kHermTol at construction and
// stored exactly symmetrized, so downstream solvers see H == H^dagger.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const CMatrix& m, double tol = kHermTol);

  const CMatrix& matrix() const { return mat_; }
  Eigen::Index dim() const { return mat_.rows(); }

 private:
  CMatrix mat_;
};

struct EigDecomposition {
  RVector eigenvalues;   // ascending; degenerate values are contiguous
  CMatrix eigenvectors;  // columns, orthonormal, aligned with eigenvalues
};

struct PsdCheckResult {
  bool holds = false;
  double min_eigenvalue = 0.0;
  CVector witness;  // eigenvector attaining min_eigenvalue of (Y - X)
};

EigDecomposition eig_hermitian(const HermitianMatrix& h);

// |X| = sqrt(X^dagger X); result is PSD and satisfies |X|^2 = X^dagger X.
HermitianMatrix matrix_modulus(const CMatrix& x);

// PSD square root. Eigenvalues in [-kPsdTol, 0) are clamped to zero; anything
// lower is a PreconditionError.
HermitianMatrix operator_sqrt(const HermitianMatrix& m);

// Operator inequality X <= Y, decided by the minimum eigenvalue of Y - X.
PsdCheckResult psd_leq(const HermitianMatrix& x, const HermitianMatrix& y,
                       double tol = kPsdTol);

CMatrix kron(const CMatrix& a, const CMatrix& b);

// Left fold: parties[0] occupies the most significant (leftmost) slot.
CMatrix kron_list(const std::vector<CMatrix>& factors);

// Trace out every subsystem not listed in `keep`; kept subsystems stay in
// their original relative order. dims must multiply to the matrix dimension.
CMatrix partial_trace(const CMatrix& m, const std::vector<Eigen::Index>& dims,
                      const std::vector<int>& keep);

// Reorder tensor factors: subsystem perm[i] of the input becomes slot i.
CMatrix permute_systems(const CMatrix& m, const std::vector<Eigen::Index>& dims,
                        const std::vector<int>& perm);

CMatrix identity(Eigen::Index n);
CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();

// Spectral norm (largest singular value); for Hermitian input max |eigenvalue|.
double op_norm(const CMatrix& m);

// ||A - B||_F / max(||B||_F, 1).
double rel_frobenius_dist(const CMatrix& a, const CMatrix& b);

// Largest deviation from Hermitian symmetry, max_ij |m_ij - conj(m_ji)|.
double hermiticity_defect(const CMatrix& m);

// Half-open [begin, end) runs of eigenvalues closer than tol to a neighbour.
// Input must be sorted ascending.
std::vector<std::pair<Eigen::Index, Eigen::Index>> eigenvalue_clusters(
    const RVector& sorted_evals, double tol = kClusterTol);

}  // namespace bellcert

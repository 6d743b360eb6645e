#pragma once

#include "bellcert/linalg.hpp"
#include "bellcert/rng.hpp"

namespace bellcert {

// Hermitian A with spectrum in [-1, 1]; validated once at construction.
// The projective flag is computed (||A^2 - 1||_op <= kProjectiveTol), never
// taken on trust from callers or serialized input.
class BinaryObservable {
 public:
  explicit BinaryObservable(const CMatrix& m);

  const CMatrix& matrix() const { return herm_.matrix(); }
  Eigen::Index dim() const { return herm_.dim(); }
  bool projective() const { return projective_; }

 private:
  HermitianMatrix herm_;
  bool projective_;
};

// PSD, unit trace within kTraceTol. Minimum eigenvalue kept for rank checks.
class DensityMatrix {
 public:
  explicit DensityMatrix(const CMatrix& m);

  const CMatrix& matrix() const { return herm_.matrix(); }
  Eigen::Index dim() const { return herm_.dim(); }
  double min_eigenvalue() const { return min_eig_; }
  bool full_rank(double rank_tol = kRankTol) const { return min_eig_ > rank_tol; }

 private:
  HermitianMatrix herm_;
  double min_eig_;
};

// t = tr(|[A0, A1]| rho) / 2, the commutator strength seen by the state.
// Lies in [0, 1]; values outside by more than kPsdTol are an error, closer
// excursions are clamped. The _raw variant returns the unclamped trace.
double effective_commutator(const BinaryObservable& a0, const BinaryObservable& a1,
                            const DensityMatrix& rho);
double effective_commutator_raw(const BinaryObservable& a0, const BinaryObservable& a1,
                                const DensityMatrix& rho);

// T_alpha = (alpha^2 - 1) {A0, A1} + 2 alpha |[A0, A1]|, the operator whose
// state average controls the biased trade-off. Requires alpha >= 1.
HermitianMatrix t_alpha_operator(const BinaryObservable& a0,
                                 const BinaryObservable& a1, double alpha);

// t_alpha = tr(T_alpha rho)/4 - (alpha^2 - 1)/2; reduces to the effective
// commutator at alpha = 1. Can be negative for strongly biased settings.
double t_alpha(const BinaryObservable& a0, const BinaryObservable& a1,
               const DensityMatrix& rho, double alpha);

// 4*1 - |{A0,A1}|^2 - |[A0,A1]|^2, computed via |X|^2 = X^dagger X. PSD for
// any pair of binary observables and zero exactly when both are projective.
HermitianMatrix com_anticom_gap(const BinaryObservable& a0,
                                const BinaryObservable& a1);

// QR of a complex Gaussian matrix with the R diagonal phases absorbed into Q,
// which makes the distribution exactly Haar.
CMatrix haar_unitary(Eigen::Index dim, SplitMix64& rng);

// Haar-conjugated diagonal: signs +/-1 when projective, uniform [-1, 1] when
// not. Deterministic given the generator state.
BinaryObservable random_binary_observable(Eigen::Index dim, bool projective,
                                          SplitMix64& rng);

// G G^dagger normalized, G complex Gaussian; full rank almost surely.
DensityMatrix random_density_matrix(Eigen::Index dim, SplitMix64& rng);

// Nearest binary observable: eigenvalues clamped into [-1, 1].
BinaryObservable project_to_binary(const HermitianMatrix& h);

// Nearest projective observable: eigenvalues rounded to sign, 0 -> +1.
BinaryObservable project_to_projective(const HermitianMatrix& h);

}  // namespace bellcert

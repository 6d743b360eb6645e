#include "bellcert/observables.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bellcert {

BinaryObservable::BinaryObservable(const CMatrix& m) : herm_(m), projective_(false) {
  EigDecomposition eig = eig_hermitian(herm_);
  double lo = eig.eigenvalues[0];
  double hi = eig.eigenvalues[eig.eigenvalues.size() - 1];
  if (lo < -1.0 - kPsdTol || hi > 1.0 + kPsdTol) {
    throw PreconditionError("BinaryObservable: spectrum [" + std::to_string(lo) +
                            ", " + std::to_string(hi) + "] leaves [-1, 1]");
  }
  CMatrix square_defect = herm_.matrix() * herm_.matrix() - identity(dim());
  projective_ = op_norm(square_defect) <= kProjectiveTol;
}

DensityMatrix::DensityMatrix(const CMatrix& m) : herm_(m), min_eig_(0.0) {
  EigDecomposition eig = eig_hermitian(herm_);
  min_eig_ = eig.eigenvalues[0];
  if (min_eig_ < -kPsdTol) {
    throw PreconditionError("DensityMatrix: min eigenvalue " +
                            std::to_string(min_eig_) + " below -PSD tolerance");
  }
  double tr = herm_.matrix().trace().real();
  if (std::abs(tr - 1.0) > kTraceTol) {
    throw PreconditionError("DensityMatrix: trace " + std::to_string(tr) +
                            " is not 1");
  }
}

namespace {

void require_same_dim(const BinaryObservable& a0, const BinaryObservable& a1,
                      const char* who) {
  if (a0.dim() != a1.dim()) {
    throw DimensionError(std::string(who) + ": observables have different dimensions");
  }
}

void require_state_dim(const BinaryObservable& a, const DensityMatrix& rho,
                       const char* who) {
  if (a.dim() != rho.dim()) {
    throw DimensionError(std::string(who) + ": state dimension " +
                         std::to_string(rho.dim()) + " does not match observable " +
                         std::to_string(a.dim()));
  }
}

}  // namespace

double effective_commutator_raw(const BinaryObservable& a0, const BinaryObservable& a1,
                                const DensityMatrix& rho) {
  require_same_dim(a0, a1, "effective_commutator");
  require_state_dim(a0, rho, "effective_commutator");
  CMatrix comm = a0.matrix() * a1.matrix() - a1.matrix() * a0.matrix();
  HermitianMatrix mod = matrix_modulus(comm);
  return 0.5 * (mod.matrix() * rho.matrix()).trace().real();
}

double effective_commutator(const BinaryObservable& a0, const BinaryObservable& a1,
                            const DensityMatrix& rho) {
  double t = effective_commutator_raw(a0, a1, rho);
  if (t < -kPsdTol || t > 1.0 + kPsdTol) {
    throw PreconditionError("effective_commutator: value " + std::to_string(t) +
                            " outside [0, 1] beyond tolerance");
  }
  return std::clamp(t, 0.0, 1.0);
}

HermitianMatrix t_alpha_operator(const BinaryObservable& a0,
                                 const BinaryObservable& a1, double alpha) {
  require_same_dim(a0, a1, "t_alpha_operator");
  if (!(alpha >= 1.0)) {
    throw PreconditionError("t_alpha_operator: alpha must be >= 1");
  }
  CMatrix anti = a0.matrix() * a1.matrix() + a1.matrix() * a0.matrix();
  CMatrix comm = a0.matrix() * a1.matrix() - a1.matrix() * a0.matrix();
  CMatrix t = (alpha * alpha - 1.0) * anti + 2.0 * alpha * matrix_modulus(comm).matrix();
  return HermitianMatrix(t);
}

double t_alpha(const BinaryObservable& a0, const BinaryObservable& a1,
               const DensityMatrix& rho, double alpha) {
  require_state_dim(a0, rho, "t_alpha");
  HermitianMatrix t_op = t_alpha_operator(a0, a1, alpha);
  double avg = (t_op.matrix() * rho.matrix()).trace().real();
  return 0.25 * avg - 0.5 * (alpha * alpha - 1.0);
}

HermitianMatrix com_anticom_gap(const BinaryObservable& a0,
                                const BinaryObservable& a1) {
  require_same_dim(a0, a1, "com_anticom_gap");
  const CMatrix& x = a0.matrix();
  const CMatrix& y = a1.matrix();
  CMatrix anti = x * y + y * x;
  CMatrix comm = x * y - y * x;
  // |{A0,A1}|^2 = {A0,A1}^2 (Hermitian), |[A0,A1]|^2 = -[A0,A1]^2 (anti-Hermitian)
  CMatrix gap = 4.0 * identity(x.rows()) - anti * anti + comm * comm;
  return HermitianMatrix(gap);
}

CMatrix haar_unitary(Eigen::Index dim, SplitMix64& rng) {
  if (dim < 1) throw DimensionError("haar_unitary: dimension < 1");
  CMatrix g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      g(i, j) = Complex(rng.next_normal(), rng.next_normal());
    }
  }
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < dim; ++i) {
    Complex d = r(i, i);
    double a = std::abs(d);
    q.col(i) *= (a > 0.0) ? d / a : Complex(1.0, 0.0);
  }
  return q;
}

BinaryObservable random_binary_observable(Eigen::Index dim, bool projective,
                                          SplitMix64& rng) {
  CMatrix u = haar_unitary(dim, rng);
  RVector evals(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    evals[i] = projective ? ((rng.next_u64() & 1ull) ? 1.0 : -1.0)
                          : rng.next_uniform(-1.0, 1.0);
  }
  return BinaryObservable(u * evals.asDiagonal() * u.adjoint());
}

DensityMatrix random_density_matrix(Eigen::Index dim, SplitMix64& rng) {
  if (dim < 1) throw DimensionError("random_density_matrix: dimension < 1");
  CMatrix g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      g(i, j) = Complex(rng.next_normal(), rng.next_normal());
    }
  }
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(rho);
}

namespace {

BinaryObservable remap_eigenvalues(const HermitianMatrix& h, double (*f)(double)) {
  EigDecomposition eig = eig_hermitian(h);
  RVector mapped(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < mapped.size(); ++i) mapped[i] = f(eig.eigenvalues[i]);
  return BinaryObservable(eig.eigenvectors * mapped.asDiagonal() *
                          eig.eigenvectors.adjoint());
}

}  // namespace

BinaryObservable project_to_binary(const HermitianMatrix& h) {
  return remap_eigenvalues(h, [](double v) { return std::clamp(v, -1.0, 1.0); });
}

BinaryObservable project_to_projective(const HermitianMatrix& h) {
  return remap_eigenvalues(h, [](double v) { return v < 0.0 ? -1.0 : 1.0; });
}

}  // namespace bellcert

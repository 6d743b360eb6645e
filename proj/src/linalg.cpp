#include "bellcert/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bellcert {

namespace {

void require_square(const CMatrix& m, const char* who) {
  if (m.rows() != m.cols()) {
    throw DimensionError(std::string(who) + ": matrix is " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                         ", expected square");
  }
}

}  // namespace

HermitianMatrix::HermitianMatrix(const CMatrix& m, double tol) {
  require_square(m, "HermitianMatrix");
  double defect = hermiticity_defect(m);
  if (!(defect <= tol)) {
    throw PreconditionError("HermitianMatrix: hermiticity defect " +
                            std::to_string(defect) + " exceeds tolerance");
  }
  mat_ = 0.5 * (m + m.adjoint());
}

EigDecomposition eig_hermitian(const HermitianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.matrix());
  if (solver.info() != Eigen::Success) {
    throw PreconditionError("eig_hermitian: solver failed to converge");
  }
  return EigDecomposition{solver.eigenvalues(), solver.eigenvectors()};
}

HermitianMatrix matrix_modulus(const CMatrix& x) {
  require_square(x, "matrix_modulus");
  HermitianMatrix gram(x.adjoint() * x);
  EigDecomposition eig = eig_hermitian(gram);
  RVector roots(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < roots.size(); ++i) {
    roots[i] = std::sqrt(std::max(eig.eigenvalues[i], 0.0));
  }
  CMatrix mod = eig.eigenvectors * roots.asDiagonal() * eig.eigenvectors.adjoint();
  return HermitianMatrix(mod);
}

HermitianMatrix operator_sqrt(const HermitianMatrix& m) {
  EigDecomposition eig = eig_hermitian(m);
  double min_eig = eig.eigenvalues.size() ? eig.eigenvalues[0] : 0.0;
  if (min_eig < -kPsdTol) {
    throw PreconditionError("operator_sqrt: matrix is not PSD (min eigenvalue " +
                            std::to_string(min_eig) + ")");
  }
  RVector roots(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < roots.size(); ++i) {
    roots[i] = std::sqrt(std::max(eig.eigenvalues[i], 0.0));
  }
  CMatrix root = eig.eigenvectors * roots.asDiagonal() * eig.eigenvectors.adjoint();
  return HermitianMatrix(root);
}

PsdCheckResult psd_leq(const HermitianMatrix& x, const HermitianMatrix& y,
                       double tol) {
  if (x.dim() != y.dim()) {
    throw DimensionError("psd_leq: operands have different dimensions");
  }
  EigDecomposition gap = eig_hermitian(HermitianMatrix(y.matrix() - x.matrix()));
  PsdCheckResult result;
  result.min_eigenvalue = gap.eigenvalues[0];
  result.witness = gap.eigenvectors.col(0);
  result.holds = result.min_eigenvalue >= -tol;
  return result;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix kron_list(const std::vector<CMatrix>& factors) {
  if (factors.empty()) {
    throw DimensionError("kron_list: empty factor list");
  }
  CMatrix out = factors[0];
  for (std::size_t i = 1; i < factors.size(); ++i) {
    out = kron(out, factors[i]);
  }
  return out;
}

namespace {

Eigen::Index checked_total_dim(const CMatrix& m,
                               const std::vector<Eigen::Index>& dims,
                               const char* who) {
  require_square(m, who);
  Eigen::Index total = 1;
  for (Eigen::Index d : dims) {
    if (d < 1) throw DimensionError(std::string(who) + ": subsystem dimension < 1");
    total *= d;
  }
  if (total != m.rows()) {
    throw DimensionError(std::string(who) + ": subsystem dimensions multiply to " +
                         std::to_string(total) + ", matrix dimension is " +
                         std::to_string(m.rows()));
  }
  return total;
}

// Row-major strides of a tensor index, last subsystem fastest.
std::vector<Eigen::Index> strides_of(const std::vector<Eigen::Index>& dims) {
  std::vector<Eigen::Index> strides(dims.size(), 1);
  for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i) {
    strides[i] = strides[i + 1] * dims[i + 1];
  }
  return strides;
}

}  // namespace

CMatrix partial_trace(const CMatrix& m, const std::vector<Eigen::Index>& dims,
                      const std::vector<int>& keep) {
  checked_total_dim(m, dims, "partial_trace");
  const int n = static_cast<int>(dims.size());
  std::vector<bool> kept(n, false);
  for (int k : keep) {
    if (k < 0 || k >= n) throw DimensionError("partial_trace: keep index out of range");
    if (kept[k]) throw DimensionError("partial_trace: duplicate keep index");
    kept[k] = true;
  }

  std::vector<int> keep_sorted, traced;
  for (int i = 0; i < n; ++i) (kept[i] ? keep_sorted : traced).push_back(i);

  Eigen::Index keep_dim = 1, trace_dim = 1;
  for (int i : keep_sorted) keep_dim *= dims[i];
  for (int i : traced) trace_dim *= dims[i];

  std::vector<Eigen::Index> strides = strides_of(dims);
  CMatrix out = CMatrix::Zero(keep_dim, keep_dim);

  // Walk kept row/column multi-indices and sum over the traced diagonal.
  std::vector<Eigen::Index> ki(keep_sorted.size(), 0), kj(keep_sorted.size(), 0);
  for (Eigen::Index r = 0; r < keep_dim; ++r) {
    // decode r into ki
    Eigen::Index rr = r;
    for (int a = static_cast<int>(keep_sorted.size()) - 1; a >= 0; --a) {
      ki[a] = rr % dims[keep_sorted[a]];
      rr /= dims[keep_sorted[a]];
    }
    for (Eigen::Index c = 0; c < keep_dim; ++c) {
      Eigen::Index cc = c;
      for (int a = static_cast<int>(keep_sorted.size()) - 1; a >= 0; --a) {
        kj[a] = cc % dims[keep_sorted[a]];
        cc /= dims[keep_sorted[a]];
      }
      Eigen::Index row_base = 0, col_base = 0;
      for (std::size_t a = 0; a < keep_sorted.size(); ++a) {
        row_base += ki[a] * strides[keep_sorted[a]];
        col_base += kj[a] * strides[keep_sorted[a]];
      }
      Complex sum = 0.0;
      for (Eigen::Index t = 0; t < trace_dim; ++t) {
        Eigen::Index tt = t, offset = 0;
        for (int a = static_cast<int>(traced.size()) - 1; a >= 0; --a) {
          offset += (tt % dims[traced[a]]) * strides[traced[a]];
          tt /= dims[traced[a]];
        }
        sum += m(row_base + offset, col_base + offset);
      }
      out(r, c) = sum;
    }
  }
  return out;
}

CMatrix permute_systems(const CMatrix& m, const std::vector<Eigen::Index>& dims,
                        const std::vector<int>& perm) {
  Eigen::Index total = checked_total_dim(m, dims, "permute_systems");
  const int n = static_cast<int>(dims.size());
  if (static_cast<int>(perm.size()) != n) {
    throw DimensionError("permute_systems: permutation length mismatch");
  }
  std::vector<bool> seen(n, false);
  for (int p : perm) {
    if (p < 0 || p >= n || seen[p]) throw DimensionError("permute_systems: invalid permutation");
    seen[p] = true;
  }

  std::vector<Eigen::Index> new_dims(n);
  for (int i = 0; i < n; ++i) new_dims[i] = dims[perm[i]];
  std::vector<Eigen::Index> old_strides = strides_of(dims);
  std::vector<Eigen::Index> new_strides = strides_of(new_dims);

  // old index for each new basis label
  std::vector<Eigen::Index> source(total);
  std::vector<Eigen::Index> digits(n);
  for (Eigen::Index idx = 0; idx < total; ++idx) {
    Eigen::Index rest = idx;
    for (int a = n - 1; a >= 0; --a) {
      digits[a] = rest % new_dims[a];
      rest /= new_dims[a];
    }
    Eigen::Index old_idx = 0;
    for (int a = 0; a < n; ++a) old_idx += digits[a] * old_strides[perm[a]];
    source[idx] = old_idx;
  }

  CMatrix out(total, total);
  for (Eigen::Index i = 0; i < total; ++i) {
    for (Eigen::Index j = 0; j < total; ++j) {
      out(i, j) = m(source[i], source[j]);
    }
  }
  return out;
}

CMatrix identity(Eigen::Index n) { return CMatrix::Identity(n, n); }

CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

CMatrix pauli_y() {
  CMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

double op_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()[0];
}

double rel_frobenius_dist(const CMatrix& a, const CMatrix& b) {
  return (a - b).norm() / std::max(b.norm(), 1.0);
}

double hermiticity_defect(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> eigenvalue_clusters(
    const RVector& sorted_evals, double tol) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> clusters;
  Eigen::Index n = sorted_evals.size();
  Eigen::Index begin = 0;
  for (Eigen::Index i = 1; i <= n; ++i) {
    if (i == n || sorted_evals[i] - sorted_evals[i - 1] > tol) {
      clusters.emplace_back(begin, i);
      begin = i;
    }
  }
  return clusters;
}

}  // namespace bellcert

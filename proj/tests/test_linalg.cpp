#include <doctest.h>

#include <cmath>
#include <complex>

#include "bellcert/linalg.hpp"
#include "bellcert/rng.hpp"
#include "helpers.hpp"

using namespace bellcert;
using bellcert::testing::max_abs_diff;

namespace {

CMatrix random_complex(Eigen::Index n, SplitMix64& rng) {
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = Complex(rng.next_normal(), rng.next_normal());
  return m;
}

HermitianMatrix random_hermitian(Eigen::Index n, SplitMix64& rng) {
  CMatrix m = random_complex(n, rng);
  return HermitianMatrix(CMatrix(0.5 * (m + m.adjoint())));
}

}  // namespace

TEST_CASE("hermitian_matrix_rejects_asymmetry_and_nonsquare") {
  CMatrix bad(2, 2);
  bad << 0, 1, 0, 0;  // entry (0,1) != conj(entry (1,0))
  CHECK_THROWS_AS(HermitianMatrix{bad}, PreconditionError);
  CHECK_THROWS_AS(HermitianMatrix{CMatrix::Zero(2, 3)}, DimensionError);
  CHECK(hermiticity_defect(bad) == doctest::Approx(1.0));
}

TEST_CASE("eig_hermitian_pauli_spectra") {
  EigDecomposition z = eig_hermitian(HermitianMatrix(pauli_z()));
  CHECK(z.eigenvalues(0) == doctest::Approx(-1.0));
  CHECK(z.eigenvalues(1) == doctest::Approx(1.0));

  EigDecomposition id = eig_hermitian(HermitianMatrix(identity(2)));
  CHECK(id.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(id.eigenvalues(1) == doctest::Approx(1.0));

  EigDecomposition xx = eig_hermitian(HermitianMatrix(kron(pauli_x(), pauli_x())));
  RVector expected(4);
  expected << -1, -1, 1, 1;
  CHECK((xx.eigenvalues - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("eig_hermitian_reconstructs_and_is_unitary_and_deterministic") {
  SplitMix64 rng(11);
  for (Eigen::Index n : {2, 3, 5, 8}) {
    HermitianMatrix h = random_hermitian(n, rng);
    EigDecomposition e = eig_hermitian(h);
    CMatrix rebuilt =
        e.eigenvectors * e.eigenvalues.cast<Complex>().asDiagonal() * e.eigenvectors.adjoint();
    CHECK(rel_frobenius_dist(rebuilt, h.matrix()) < kReconstructTol);
    CHECK(max_abs_diff(e.eigenvectors.adjoint() * e.eigenvectors, identity(n)) < 1e-10);
    for (Eigen::Index i = 1; i < n; ++i) CHECK(e.eigenvalues(i) >= e.eigenvalues(i - 1));

    EigDecomposition again = eig_hermitian(h);
    CHECK(max_abs_diff(again.eigenvectors, e.eigenvectors) == 0.0);
  }
}

TEST_CASE("matrix_modulus_known_values") {
  // |c U| = |c| 1 for unitary Hermitian U
  CHECK(max_abs_diff(matrix_modulus(Complex(0, 2) * pauli_z()).matrix(), 2.0 * identity(2)) <
        1e-12);

  CMatrix nilpotent(2, 2);
  nilpotent << 0, 1, 0, 0;
  CMatrix d01(2, 2);
  d01 << 0, 0, 0, 1;
  CHECK(max_abs_diff(matrix_modulus(nilpotent).matrix(), d01) < 1e-12);

  // [sigma_x, sigma_y] = 2i sigma_z
  CMatrix comm = pauli_x() * pauli_y() - pauli_y() * pauli_x();
  CHECK(max_abs_diff(matrix_modulus(comm).matrix(), 2.0 * identity(2)) < 1e-12);
}

TEST_CASE("matrix_modulus_squares_to_gram_matrix") {
  SplitMix64 rng(17);
  for (Eigen::Index n : {2, 4, 6}) {
    CMatrix x = random_complex(n, rng);
    HermitianMatrix mod = matrix_modulus(x);
    EigDecomposition e = eig_hermitian(mod);
    CHECK(e.eigenvalues(0) >= -kPsdTol);
    CHECK(rel_frobenius_dist(mod.matrix() * mod.matrix(), x.adjoint() * x) < kReconstructTol);
  }
}

TEST_CASE("operator_sqrt_known_values_and_clamping") {
  CMatrix d49 = CMatrix::Zero(2, 2);
  d49(0, 0) = 4;
  d49(1, 1) = 9;
  CMatrix d23 = CMatrix::Zero(2, 2);
  d23(0, 0) = 2;
  d23(1, 1) = 3;
  CHECK(max_abs_diff(operator_sqrt(HermitianMatrix(d49)).matrix(), d23) < 1e-12);
  CHECK(max_abs_diff(operator_sqrt(HermitianMatrix(identity(3))).matrix(), identity(3)) < 1e-12);

  CMatrix comm = pauli_x() * pauli_y() - pauli_y() * pauli_x();
  CMatrix gap = 4.0 * identity(2) - matrix_modulus(comm).matrix() * matrix_modulus(comm).matrix();
  CHECK(op_norm(operator_sqrt(HermitianMatrix(gap)).matrix()) < 1e-6);

  // slightly negative eigenvalues clamp to zero, real negatives are errors
  CMatrix tiny = CMatrix::Zero(2, 2);
  tiny(0, 0) = -1e-9;
  tiny(1, 1) = 1;
  CHECK(operator_sqrt(HermitianMatrix(tiny)).matrix()(1, 1).real() == doctest::Approx(1.0));
  CHECK_THROWS_AS(operator_sqrt(HermitianMatrix(pauli_z())), PreconditionError);
}

TEST_CASE("psd_leq_decides_and_reports_witness") {
  PsdCheckResult r = psd_leq(HermitianMatrix(pauli_x()), HermitianMatrix(identity(2)));
  CHECK(r.holds);
  CHECK(r.min_eigenvalue == doctest::Approx(0.0).epsilon(1e-12));

  PsdCheckResult bad = psd_leq(HermitianMatrix(2.0 * identity(2)), HermitianMatrix(identity(2)));
  CHECK_FALSE(bad.holds);
  CHECK(bad.min_eigenvalue == doctest::Approx(-1.0));

  CMatrix d12 = CMatrix::Zero(2, 2), d23 = CMatrix::Zero(2, 2);
  d12(0, 0) = 1;
  d12(1, 1) = 2;
  d23(0, 0) = 2;
  d23(1, 1) = 3;
  CHECK(psd_leq(HermitianMatrix(d12), HermitianMatrix(d23)).holds);

  // witness attains the reported eigenvalue of (Y - X)
  SplitMix64 rng(3);
  CMatrix g(3, 3);
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 3; ++j) g(i, j) = Complex(rng.next_normal(), rng.next_normal());
  HermitianMatrix x(CMatrix(0.5 * (g + g.adjoint())));
  HermitianMatrix y(CMatrix(x.matrix() + identity(3)));
  PsdCheckResult w = psd_leq(x, y);
  Complex quad = w.witness.dot((y.matrix() - x.matrix()) * w.witness);
  CHECK(quad.real() == doctest::Approx(w.min_eigenvalue).epsilon(1e-9));

  CHECK_THROWS_AS(psd_leq(HermitianMatrix(identity(2)), HermitianMatrix(identity(3))),
                  DimensionError);
}

TEST_CASE("psd_leq_is_transitive_on_random_chains") {
  SplitMix64 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    CMatrix g(4, 4), p1(4, 4), p2(4, 4);
    for (Eigen::Index i = 0; i < 4; ++i)
      for (Eigen::Index j = 0; j < 4; ++j) {
        g(i, j) = Complex(rng.next_normal(), rng.next_normal());
        p1(i, j) = Complex(rng.next_normal(), rng.next_normal());
        p2(i, j) = Complex(rng.next_normal(), rng.next_normal());
      }
    HermitianMatrix x(CMatrix(0.5 * (g + g.adjoint())));
    HermitianMatrix y(CMatrix(x.matrix() + p1 * p1.adjoint()));
    HermitianMatrix z(CMatrix(y.matrix() + p2 * p2.adjoint()));
    REQUIRE(psd_leq(x, y).holds);
    REQUIRE(psd_leq(y, z).holds);
    CHECK(psd_leq(x, z, 2.0 * kPsdTol).holds);
  }
}

TEST_CASE("kron_block_structure") {
  CMatrix xi = kron(pauli_x(), identity(2));
  CHECK(max_abs_diff(xi.topRightCorner(2, 2), identity(2)) < 1e-15);
  CHECK(max_abs_diff(xi.bottomLeftCorner(2, 2), identity(2)) < 1e-15);
  CHECK(max_abs_diff(xi.topLeftCorner(2, 2), CMatrix::Zero(2, 2)) < 1e-15);

  CMatrix m = pauli_y();
  CHECK(max_abs_diff(kron(identity(1), m), m) == 0.0);

  CMatrix zzz = kron_list({pauli_z(), pauli_z(), pauli_z()});
  RVector signs(8);
  signs << 1, -1, -1, 1, -1, 1, 1, -1;
  for (Eigen::Index i = 0; i < 8; ++i) CHECK(zzz(i, i).real() == doctest::Approx(signs(i)));
  CHECK_THROWS_AS(kron_list({}), DimensionError);
}

TEST_CASE("partial_trace_known_reductions") {
  CVector phi = CVector::Zero(4);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);  // (|00> + |11>)/sqrt(2)
  CMatrix reduced = partial_trace(bellcert::testing::projector(phi), {2, 2}, {0});
  CHECK(max_abs_diff(reduced, 0.5 * identity(2)) < 1e-12);

  // product input: keeping one factor scales by the trace of the other
  CMatrix rho = 0.5 * (identity(2) + 0.3 * pauli_z());
  CMatrix sigma = identity(2);  // trace 2 on purpose
  CHECK(max_abs_diff(partial_trace(kron(rho, sigma), {2, 2}, {0}), 2.0 * rho) < 1e-12);

  CVector ghz = CVector::Zero(8);
  ghz(0) = ghz(7) = 1.0 / std::sqrt(2.0);
  CMatrix mid = partial_trace(bellcert::testing::projector(ghz), {2, 2, 2}, {1});
  CHECK(max_abs_diff(mid, 0.5 * identity(2)) < 1e-12);
}

TEST_CASE("partial_trace_preserves_trace_and_handles_empty_keep") {
  SplitMix64 rng(5);
  CMatrix m(12, 12);
  for (Eigen::Index i = 0; i < 12; ++i)
    for (Eigen::Index j = 0; j < 12; ++j) m(i, j) = Complex(rng.next_normal(), rng.next_normal());
  CMatrix kept = partial_trace(m, {2, 3, 2}, {0, 2});
  CHECK(std::abs(kept.trace() - m.trace()) < 1e-10);

  CMatrix scalar = partial_trace(m, {2, 3, 2}, {});
  REQUIRE(scalar.rows() == 1);
  CHECK(std::abs(scalar(0, 0) - m.trace()) < 1e-10);

  CHECK(max_abs_diff(partial_trace(m, {12}, {0}), m) == 0.0);

  CHECK_THROWS_AS(partial_trace(m, {2, 2}, {0}), DimensionError);
  CHECK_THROWS_AS(partial_trace(m, {2, 3, 2}, {3}), DimensionError);
  CHECK_THROWS_AS(partial_trace(m, {2, 3, 2}, {0, 0}), DimensionError);
}

TEST_CASE("permute_systems_swaps_tensor_factors") {
  CMatrix xy = kron(pauli_x(), pauli_y());
  CMatrix yx = permute_systems(xy, {2, 2}, {1, 0});
  CHECK(max_abs_diff(yx, kron(pauli_y(), pauli_x())) < 1e-15);

  // three factors: target slot i takes source perm[i]
  CMatrix xyz = kron_list({pauli_x(), pauli_y(), pauli_z()});
  CMatrix zxy = permute_systems(xyz, {2, 2, 2}, {2, 0, 1});
  CHECK(max_abs_diff(zxy, kron_list({pauli_z(), pauli_x(), pauli_y()})) < 1e-15);

  CHECK_THROWS_AS(permute_systems(xy, {2, 2}, {0, 0}), DimensionError);
}

TEST_CASE("eigenvalue_clusters_groups_within_tol") {
  RVector vals(5);
  vals << 0.0, 1e-12, 0.5, 1.0, 1.0 + 5e-10;
  auto clusters = eigenvalue_clusters(vals);
  REQUIRE(clusters.size() == 3);
  CHECK(clusters[0] == std::make_pair<Eigen::Index, Eigen::Index>(0, 2));
  CHECK(clusters[1] == std::make_pair<Eigen::Index, Eigen::Index>(2, 3));
  CHECK(clusters[2] == std::make_pair<Eigen::Index, Eigen::Index>(3, 5));
}

TEST_CASE("op_norm_matches_largest_eigenvalue_magnitude") {
  CHECK(op_norm(3.0 * pauli_x()) == doctest::Approx(3.0));
  CHECK(op_norm(CMatrix::Zero(3, 3)) == doctest::Approx(0.0));
}

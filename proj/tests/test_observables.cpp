#include <doctest.h>

#include <cmath>

#include "bellcert/observables.hpp"
#include "helpers.hpp"

using namespace bellcert;
using bellcert::testing::max_abs_diff;
using bellcert::testing::obs;
using bellcert::testing::tilted_x;

TEST_CASE("binary_observable_validates_spectrum_and_computes_projective_flag") {
  CHECK(obs(pauli_x()).projective());
  CHECK(obs(identity(2)).projective());
  CHECK_FALSE(obs(0.5 * pauli_x()).projective());

  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 0.3;
  CHECK_FALSE(obs(d).projective());

  CHECK_THROWS_AS(obs(2.0 * pauli_x()), PreconditionError);
  CHECK_THROWS_AS(obs(CMatrix(-1.5 * identity(2))), PreconditionError);
}

TEST_CASE("density_matrix_validates_psd_and_trace_and_rank") {
  DensityMatrix mixed(0.5 * identity(2));
  CHECK(mixed.full_rank());
  CHECK(mixed.min_eigenvalue() == doctest::Approx(0.5));

  CMatrix pure = CMatrix::Zero(2, 2);
  pure(0, 0) = 1.0;
  CHECK_FALSE(DensityMatrix(pure).full_rank());

  CHECK_THROWS_AS(DensityMatrix(identity(2)), PreconditionError);  // trace 2
  CMatrix neg = CMatrix::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix{neg}, PreconditionError);
}

TEST_CASE("effective_commutator_known_values") {
  DensityMatrix mixed(0.5 * identity(2));
  CHECK(effective_commutator(obs(pauli_x()), obs(pauli_y()), mixed) == doctest::Approx(1.0));
  CHECK(effective_commutator(obs(pauli_x()), obs(pauli_x()), mixed) ==
        doctest::Approx(0.0).epsilon(1e-12));

  // |[sigma_x, tilted_x(g)]| = 2 sin(g) 1, so t = sin(g) for any unit-trace state
  SplitMix64 rng(7);
  DensityMatrix random_state = random_density_matrix(2, rng);
  for (const DensityMatrix& rho : {mixed, random_state}) {
    CHECK(effective_commutator(obs(pauli_x()), obs(tilted_x(M_PI / 6.0)), rho) ==
          doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("effective_commutator_rejects_dimension_mismatch") {
  DensityMatrix mixed(0.5 * identity(2));
  CHECK_THROWS_AS(
      effective_commutator(obs(kron(pauli_x(), identity(2))), obs(pauli_y()), mixed),
      DimensionError);
}

TEST_CASE("t_alpha_known_values_and_tight_family_formula") {
  DensityMatrix mixed(0.5 * identity(2));
  CHECK(t_alpha(obs(pauli_x()), obs(pauli_y()), mixed, 1.0) == doctest::Approx(1.0));

  // commuting pair: T_alpha = 2(alpha^2 - 1) {A,A}/2 = 6*1 at alpha=2, value 0
  SplitMix64 rng(13);
  DensityMatrix any_rho = random_density_matrix(2, rng);
  CHECK(t_alpha(obs(pauli_x()), obs(pauli_x()), any_rho, 2.0) ==
        doctest::Approx(0.0).epsilon(1e-12));

  for (double alpha : {1.0, 1.5, std::sqrt(3.0)}) {
    for (double gamma : {0.0, 0.4, M_PI / 6.0, M_PI_2}) {
      double a2 = alpha * alpha;
      double expected = 0.5 * (a2 - 1.0) * std::cos(gamma) + alpha * std::sin(gamma) -
                        0.5 * (a2 - 1.0);
      CHECK(t_alpha(obs(pauli_x()), obs(tilted_x(gamma)), any_rho, alpha) ==
            doctest::Approx(expected).epsilon(1e-10));
    }
  }

  CHECK_THROWS_AS(t_alpha(obs(pauli_x()), obs(pauli_y()), mixed, 0.5), PreconditionError);
}

TEST_CASE("commutator_measures_are_invariant_under_unitaries_and_padding") {
  SplitMix64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    BinaryObservable a0 = random_binary_observable(2, trial % 2 == 0, rng);
    BinaryObservable a1 = random_binary_observable(2, trial % 2 == 1, rng);
    DensityMatrix rho = random_density_matrix(2, rng);
    double t = effective_commutator(a0, a1, rho);

    CMatrix v = haar_unitary(2, rng);
    double t_conj = effective_commutator(
        obs(v * a0.matrix() * v.adjoint()), obs(v * a1.matrix() * v.adjoint()),
        DensityMatrix(v * rho.matrix() * v.adjoint()));
    CHECK(t_conj == doctest::Approx(t).epsilon(1e-9));

    DensityMatrix sigma = random_density_matrix(3, rng);
    double t_pad = effective_commutator(obs(kron(a0.matrix(), identity(3))),
                                        obs(kron(a1.matrix(), identity(3))),
                                        DensityMatrix(kron(rho.matrix(), sigma.matrix())));
    CHECK(t_pad == doctest::Approx(t).epsilon(1e-9));
  }
}

TEST_CASE("maximal_commutator_strength_means_modulus_is_two") {
  SplitMix64 rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    DensityMatrix rho = random_density_matrix(2, rng);  // full rank a.s.
    REQUIRE(rho.full_rank());
    CHECK(effective_commutator(obs(pauli_x()), obs(pauli_y()), rho) ==
          doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("com_anticom_gap_zero_iff_projective") {
  CHECK(op_norm(com_anticom_gap(obs(pauli_x()), obs(pauli_y())).matrix()) < 1e-10);

  HermitianMatrix gap = com_anticom_gap(obs(0.5 * pauli_x()), obs(pauli_y()));
  EigDecomposition e = eig_hermitian(gap);
  CHECK(e.eigenvalues(0) > -kPsdTol);
  CHECK(op_norm(gap.matrix()) > 1e-3);

  SplitMix64 rng(41);
  for (Eigen::Index dim : {2, 4, 8}) {
    for (int trial = 0; trial < 20; ++trial) {
      BinaryObservable a0 = random_binary_observable(dim, trial % 3 == 0, rng);
      BinaryObservable a1 = random_binary_observable(dim, trial % 2 == 0, rng);
      EigDecomposition g = eig_hermitian(com_anticom_gap(a0, a1));
      CHECK(g.eigenvalues(0) > -kPsdTol);
      if (a0.projective() && a1.projective()) {
        CHECK(op_norm(com_anticom_gap(a0, a1).matrix()) < 1e-10);
      }
    }
  }
}

TEST_CASE("random_generation_is_seed_deterministic_and_valid") {
  SplitMix64 rng_a(99), rng_b(99);
  BinaryObservable a = random_binary_observable(4, true, rng_a);
  BinaryObservable b = random_binary_observable(4, true, rng_b);
  CHECK(max_abs_diff(a.matrix(), b.matrix()) == 0.0);
  CHECK(a.projective());
  CHECK(op_norm(a.matrix() * a.matrix() - identity(4)) < 1e-10);

  BinaryObservable c = random_binary_observable(4, false, rng_a);
  EigDecomposition e = eig_hermitian(HermitianMatrix(c.matrix()));
  CHECK(e.eigenvalues(0) >= -1.0 - 1e-12);
  CHECK(e.eigenvalues(3) <= 1.0 + 1e-12);

  CMatrix u = haar_unitary(5, rng_a);
  CHECK(max_abs_diff(u.adjoint() * u, identity(5)) < 1e-12);

  DensityMatrix rho = random_density_matrix(4, rng_a);
  CHECK(std::abs(rho.matrix().trace().real() - 1.0) < 1e-12);
  CHECK(rho.full_rank());

  CHECK_THROWS_AS(random_binary_observable(0, true, rng_a), DimensionError);
}

TEST_CASE("projection_to_binary_and_projective_observables") {
  CMatrix stretched = CMatrix::Zero(2, 2);
  stretched(0, 0) = 3.0;
  stretched(1, 1) = -2.0;
  CMatrix clamped = project_to_binary(HermitianMatrix(stretched)).matrix();
  CHECK(clamped(0, 0).real() == doctest::Approx(1.0));
  CHECK(clamped(1, 1).real() == doctest::Approx(-1.0));

  CMatrix small = CMatrix::Zero(2, 2);
  small(0, 0) = 0.2;
  small(1, 1) = -0.7;
  CMatrix rounded = project_to_projective(HermitianMatrix(small)).matrix();
  CHECK(rounded(0, 0).real() == doctest::Approx(1.0));
  CHECK(rounded(1, 1).real() == doctest::Approx(-1.0));

  // zero eigenvalue rounds to +1
  CMatrix zero_half = CMatrix::Zero(2, 2);
  zero_half(1, 1) = 0.5;
  CMatrix tie = project_to_projective(HermitianMatrix(zero_half)).matrix();
  CHECK(tie(0, 0).real() == doctest::Approx(1.0));
  CHECK(tie(1, 1).real() == doctest::Approx(1.0));
}

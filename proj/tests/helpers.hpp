#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "bellcert/bell.hpp"
#include "bellcert/certify.hpp"
#include "bellcert/linalg.hpp"
#include "bellcert/observables.hpp"

namespace bellcert::testing {

inline BinaryObservable obs(const CMatrix& m) { return BinaryObservable(m); }

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline CMatrix projector(const CVector& v) { return v * v.adjoint(); }

// cos(g) sigma_x + sin(g) sigma_y
inline CMatrix tilted_x(double gamma) {
  return std::cos(gamma) * pauli_x() + std::sin(gamma) * pauli_y();
}

inline double theta_of(double alpha) {
  return std::acos((alpha * alpha - 1.0) / (alpha * alpha + 1.0));
}

inline DensityMatrix top_eigvec_state(const HermitianMatrix& w) {
  EigDecomposition eig = eig_hermitian(w);
  return DensityMatrix(projector(eig.eigenvectors.col(eig.eigenvalues.size() - 1)));
}

// Tight-family realization: probed party measures (sigma_x, tilted_x(gamma)),
// every other party (sigma_x, sigma_y); state is the top eigenvector of W.
inline BellRealization tight_realization(const BellScenario& scenario, int party,
                                         double gamma) {
  std::vector<std::array<BinaryObservable, 2>> pairs;
  for (int k = 0; k < scenario.parties(); ++k) {
    CMatrix second = (k == party) ? tilted_x(gamma) : pauli_y();
    pairs.push_back({obs(pauli_x()), obs(second)});
  }
  HermitianMatrix w = scenario.family() == BellFamily::kBiasedChsh
                          ? build_chsh_alpha(pairs[0][0], pairs[0][1], pairs[1][0],
                                             pairs[1][1], scenario.alpha())
                          : build_mabk(pairs);
  return BellRealization(scenario, pairs, top_eigvec_state(w));
}

// Maximal-violation instance: the tight family at gamma = theta_alpha for the
// biased pair, all parties at sigma_x/sigma_y for the parity family.
inline BellRealization optimal_realization(const BellScenario& scenario) {
  double gamma = scenario.family() == BellFamily::kBiasedChsh
                     ? theta_of(scenario.alpha())
                     : M_PI_2;
  return tight_realization(scenario, 0, gamma);
}

inline std::vector<Eigen::Index> qubit_dims(int parties) {
  return std::vector<Eigen::Index>(parties, 2);
}

}  // namespace bellcert::testing

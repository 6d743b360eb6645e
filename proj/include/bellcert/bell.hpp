#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "bellcert/observables.hpp"

namespace bellcert {

enum class BellFamily { kBiasedChsh, kMabk };

// Two-setting correlation scenario: the biased two-party family with weight
// alpha >= 1 on the first party's settings, or the n-party parity family.
class BellScenario {
 public:
  static BellScenario biased_chsh(double alpha, std::vector<Eigen::Index> party_dims);
  static BellScenario mabk(int parties, std::vector<Eigen::Index> party_dims);

  BellFamily family() const { return family_; }
  double alpha() const { return alpha_; }
  int parties() const { return static_cast<int>(party_dims_.size()); }
  const std::vector<Eigen::Index>& party_dims() const { return party_dims_; }
  Eigen::Index joint_dim() const;

 private:
  BellScenario(BellFamily family, double alpha, std::vector<Eigen::Index> dims);

  BellFamily family_;
  double alpha_;
  std::vector<Eigen::Index> party_dims_;
};

// Scenario plus concrete observables (two per party) and a shared state,
// cross-validated at construction.
struct BellRealization {
  BellScenario scenario;
  std::vector<std::array<BinaryObservable, 2>> observables;
  DensityMatrix state;

  BellRealization(BellScenario sc, std::vector<std::array<BinaryObservable, 2>> obs,
                  DensityMatrix rho);
};

struct BoundCheckResult {
  double lhs_max_eig = 0.0;  // largest eigenvalue of the bounded side
  double gap_min_eig = 0.0;  // min eigenvalue of (bound - lhs)
  bool passed = false;
  CVector witness_vector;  // eigenvector attaining gap_min_eig
};

// alpha (A0 + A1) x B0 + (A0 - A1) x B1. Squaring gives
//   alpha^2 (A0^2+A1^2+{A0,A1}) x B0^2 + (A0^2+A1^2-{A0,A1}) x B1^2
//   + alpha (A0^2-A1^2) x {B0,B1} - alpha [A0,A1] x [B0,B1],
// the expansion every bound in this module manipulates. Classical value 2
// alpha, quantum maximum 2 sqrt(alpha^2 + 1).
HermitianMatrix build_chsh_alpha(const BinaryObservable& a0, const BinaryObservable& a1,
                                 const BinaryObservable& b0, const BinaryObservable& b1,
                                 double alpha);

// n-party recursion W_n = W_{n-1} x (A0 + A1)/2 + W'_{n-1} x (A0 - A1)/2,
// W_1 = A0, where the primed operator swaps the settings of every party.
// Classical value 1, quantum maximum sqrt(2^{n-1}).
HermitianMatrix build_mabk(const std::vector<std::array<BinaryObservable, 2>>& obs);
HermitianMatrix build_mabk_primed(const std::vector<std::array<BinaryObservable, 2>>& obs);

// Dispatch on the realization's family; MABK(2) coincides with the unbiased
// two-party operator at half scale.
HermitianMatrix build_bell_operator(const BellRealization& r);

double bell_value(const HermitianMatrix& w, const DensityMatrix& rho);

// W^2 <= 2 (alpha^2 + 1) 1x1 + T_alpha x 1.
BoundCheckResult verify_chsh_squared_bound(const BinaryObservable& a0,
                                           const BinaryObservable& a1,
                                           const BinaryObservable& b0,
                                           const BinaryObservable& b1, double alpha,
                                           double tol = kPsdTol);

// T_alpha <= 2 (alpha^2 + 1) 1, saturated when |[A0,A1]| has eigenvalue
// 4 alpha / (alpha^2 + 1).
BoundCheckResult verify_talpha_bound(const BinaryObservable& a0,
                                     const BinaryObservable& a1, double alpha,
                                     double tol = kPsdTol);

struct MabkBoundChecks {
  BoundCheckResult commutator_bound;  // |[W, W']| <= 2 sum over odd-parity terms
  BoundCheckResult square_bound;      // W^2 <= sum over even-parity terms
};

// Both parity-sum bounds, with terms prod_j (|[A0_j, A1_j]|/2)^{x_j}.
MabkBoundChecks verify_mabk_bounds(const std::vector<std::array<BinaryObservable, 2>>& obs,
                                   double tol = kPsdTol);

// Exact square for all-projective inputs:
// W^2 = sum over even-parity x of prod_j (i [A0_j, A1_j] / 2)^{x_j}.
HermitianMatrix mabk_square_projective(const std::vector<std::array<BinaryObservable, 2>>& obs);

// Largest value compatible with commutator strength t of the probed party:
// 2 sqrt(alpha^2 + t) for the biased pair, sqrt(2^{n-2} (1 + t)) for MABK.
double tradeoff_bound(const BellScenario& scenario, double t);

struct BetaBounds {
  double classical = 0.0;
  double quantum = 0.0;
};

BetaBounds quantum_classical_bounds(const BellScenario& scenario);

// Expansion W = sum_x c_x prod_j A^{(j)}_{x_j} over setting strings x,
// party 0 on the most significant bit. Both families are pure correlation
// operators, so this is the common currency for seesaw updates.
struct CorrelatorTensor {
  int parties = 0;
  std::vector<double> coeffs;  // size 2^parties
};

CorrelatorTensor chsh_coefficients(double alpha);
CorrelatorTensor mabk_coefficients(int parties);
CorrelatorTensor scenario_coefficients(const BellScenario& scenario);

CMatrix build_correlator_operator(const CorrelatorTensor& tensor,
                                  const std::vector<std::array<BinaryObservable, 2>>& obs);

}  // namespace bellcert

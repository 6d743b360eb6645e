#include "bellcert/bell.hpp"

#include <bit>
#include <cmath>
#include <string>
#include <utility>

namespace bellcert {

BellScenario::BellScenario(BellFamily family, double alpha,
                           std::vector<Eigen::Index> dims)
    : family_(family), alpha_(alpha), party_dims_(std::move(dims)) {
  for (Eigen::Index d : party_dims_) {
    if (d < 2) throw PreconditionError("BellScenario: party dimension must be >= 2");
  }
}

BellScenario BellScenario::biased_chsh(double alpha, std::vector<Eigen::Index> party_dims) {
  if (!(alpha >= 1.0)) {
    throw PreconditionError("BellScenario: alpha must be >= 1");
  }
  if (party_dims.size() != 2) {
    throw DimensionError("BellScenario: biased_chsh has exactly two parties");
  }
  return BellScenario(BellFamily::kBiasedChsh, alpha, std::move(party_dims));
}

BellScenario BellScenario::mabk(int parties, std::vector<Eigen::Index> party_dims) {
  if (parties < 2) throw PreconditionError("BellScenario: mabk needs >= 2 parties");
  if (static_cast<int>(party_dims.size()) != parties) {
    throw DimensionError("BellScenario: party_dims length does not match party count");
  }
  return BellScenario(BellFamily::kMabk, 1.0, std::move(party_dims));
}

Eigen::Index BellScenario::joint_dim() const {
  Eigen::Index total = 1;
  for (Eigen::Index d : party_dims_) total *= d;
  return total;
}

BellRealization::BellRealization(BellScenario sc,
                                 std::vector<std::array<BinaryObservable, 2>> obs,
                                 DensityMatrix rho)
    : scenario(std::move(sc)), observables(std::move(obs)), state(std::move(rho)) {
  if (static_cast<int>(observables.size()) != scenario.parties()) {
    throw DimensionError("BellRealization: expected " +
                         std::to_string(scenario.parties()) + " observable pairs, got " +
                         std::to_string(observables.size()));
  }
  for (int k = 0; k < scenario.parties(); ++k) {
    for (const BinaryObservable& a : observables[k]) {
      if (a.dim() != scenario.party_dims()[k]) {
        throw DimensionError("BellRealization: party " + std::to_string(k) +
                             " observable dimension mismatch");
      }
    }
  }
  if (state.dim() != scenario.joint_dim()) {
    throw DimensionError("BellRealization: state dimension " +
                         std::to_string(state.dim()) + " does not match joint dimension " +
                         std::to_string(scenario.joint_dim()));
  }
}

HermitianMatrix build_chsh_alpha(const BinaryObservable& a0, const BinaryObservable& a1,
                                 const BinaryObservable& b0, const BinaryObservable& b1,
                                 double alpha) {
  if (!(alpha >= 1.0)) throw PreconditionError("build_chsh_alpha: alpha must be >= 1");
  if (a0.dim() != a1.dim() || b0.dim() != b1.dim()) {
    throw DimensionError("build_chsh_alpha: settings of one party differ in dimension");
  }
  CMatrix w = alpha * kron(a0.matrix() + a1.matrix(), b0.matrix()) +
              kron(a0.matrix() - a1.matrix(), b1.matrix());
  return HermitianMatrix(w);
}

namespace {

// Returns {W_n, W'_n}; the primed recursion follows from swapping every
// party's settings, which exchanges the roles of the two branches.
std::pair<CMatrix, CMatrix> mabk_recursion(
    const std::vector<std::array<BinaryObservable, 2>>& obs, std::size_t n) {
  const CMatrix& a0 = obs[n - 1][0].matrix();
  const CMatrix& a1 = obs[n - 1][1].matrix();
  if (n == 1) return {a0, a1};
  auto [w, wp] = mabk_recursion(obs, n - 1);
  CMatrix sum = a0 + a1;
  CMatrix diff = a0 - a1;
  return {0.5 * (kron(w, sum) + kron(wp, diff)),
          0.5 * (kron(wp, sum) - kron(w, diff))};
}

void require_mabk_obs(const std::vector<std::array<BinaryObservable, 2>>& obs,
                      const char* who) {
  if (obs.empty()) throw DimensionError(std::string(who) + ": no parties");
  for (const auto& pair : obs) {
    if (pair[0].dim() != pair[1].dim()) {
      throw DimensionError(std::string(who) + ": settings of one party differ in dimension");
    }
  }
}

}  // namespace

HermitianMatrix build_mabk(const std::vector<std::array<BinaryObservable, 2>>& obs) {
  require_mabk_obs(obs, "build_mabk");
  return HermitianMatrix(mabk_recursion(obs, obs.size()).first);
}

HermitianMatrix build_mabk_primed(const std::vector<std::array<BinaryObservable, 2>>& obs) {
  require_mabk_obs(obs, "build_mabk_primed");
  return HermitianMatrix(mabk_recursion(obs, obs.size()).second);
}

HermitianMatrix build_bell_operator(const BellRealization& r) {
  if (r.scenario.family() == BellFamily::kBiasedChsh) {
    return build_chsh_alpha(r.observables[0][0], r.observables[0][1],
                            r.observables[1][0], r.observables[1][1],
                            r.scenario.alpha());
  }
  return build_mabk(r.observables);
}

double bell_value(const HermitianMatrix& w, const DensityMatrix& rho) {
  if (w.dim() != rho.dim()) {
    throw DimensionError("bell_value: operator and state dimensions differ");
  }
  Complex tr = (w.matrix() * rho.matrix()).trace();
  if (std::abs(tr.imag()) > kTraceTol) {
    throw PreconditionError("bell_value: trace has imaginary part " +
                            std::to_string(tr.imag()));
  }
  return tr.real();
}

namespace {

BoundCheckResult check_against(const HermitianMatrix& lhs, const HermitianMatrix& bound,
                               double tol) {
  PsdCheckResult psd = psd_leq(lhs, bound, tol);
  EigDecomposition lhs_eig = eig_hermitian(lhs);
  BoundCheckResult result;
  result.lhs_max_eig = lhs_eig.eigenvalues[lhs_eig.eigenvalues.size() - 1];
  result.gap_min_eig = psd.min_eigenvalue;
  result.passed = psd.holds;
  result.witness_vector = psd.witness;
  return result;
}

}  // namespace

BoundCheckResult verify_chsh_squared_bound(const BinaryObservable& a0,
                                           const BinaryObservable& a1,
                                           const BinaryObservable& b0,
                                           const BinaryObservable& b1, double alpha,
                                           double tol) {
  HermitianMatrix w = build_chsh_alpha(a0, a1, b0, b1, alpha);
  HermitianMatrix w2(w.matrix() * w.matrix());
  CMatrix bound =
      2.0 * (alpha * alpha + 1.0) * identity(w.dim()) +
      kron(t_alpha_operator(a0, a1, alpha).matrix(), identity(b0.dim()));
  return check_against(w2, HermitianMatrix(bound), tol);
}

BoundCheckResult verify_talpha_bound(const BinaryObservable& a0,
                                     const BinaryObservable& a1, double alpha,
                                     double tol) {
  HermitianMatrix t_op = t_alpha_operator(a0, a1, alpha);
  CMatrix bound = 2.0 * (alpha * alpha + 1.0) * identity(t_op.dim());
  return check_against(t_op, HermitianMatrix(bound), tol);
}

namespace {

// sum over setting masks of given parity of prod_j factor_j^{x_j}, with the
// identity at x_j = 0.
CMatrix parity_sum(const std::vector<CMatrix>& factors, int parity) {
  const int n = static_cast<int>(factors.size());
  std::vector<CMatrix> slots(n);
  CMatrix total;
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    if ((std::popcount(mask) & 1) != parity) continue;
    for (int j = 0; j < n; ++j) {
      bool on = (mask >> (n - 1 - j)) & 1ull;
      slots[j] = on ? factors[j] : identity(factors[j].rows());
    }
    CMatrix term = kron_list(slots);
    total = (total.size() == 0) ? term : CMatrix(total + term);
  }
  return total;
}

}  // namespace

MabkBoundChecks verify_mabk_bounds(const std::vector<std::array<BinaryObservable, 2>>& obs,
                                   double tol) {
  require_mabk_obs(obs, "verify_mabk_bounds");
  const std::size_t n = obs.size();

  std::vector<CMatrix> half_moduli(n);
  for (std::size_t j = 0; j < n; ++j) {
    CMatrix comm = obs[j][0].matrix() * obs[j][1].matrix() -
                   obs[j][1].matrix() * obs[j][0].matrix();
    half_moduli[j] = 0.5 * matrix_modulus(comm).matrix();
  }

  auto [w, wp] = mabk_recursion(obs, n);
  HermitianMatrix comm_mod = matrix_modulus(w * wp - wp * w);
  HermitianMatrix odd_bound(2.0 * parity_sum(half_moduli, 1));

  HermitianMatrix w2(w * w);
  HermitianMatrix even_bound(parity_sum(half_moduli, 0));

  MabkBoundChecks checks;
  checks.commutator_bound = check_against(comm_mod, odd_bound, tol);
  checks.square_bound = check_against(w2, even_bound, tol);
  return checks;
}

HermitianMatrix mabk_square_projective(const std::vector<std::array<BinaryObservable, 2>>& obs) {
  require_mabk_obs(obs, "mabk_square_projective");
  std::vector<CMatrix> factors(obs.size());
  for (std::size_t j = 0; j < obs.size(); ++j) {
    if (!obs[j][0].projective() || !obs[j][1].projective()) {
      throw PreconditionError("mabk_square_projective: party " + std::to_string(j) +
                              " observables are not projective");
    }
    CMatrix comm = obs[j][0].matrix() * obs[j][1].matrix() -
                   obs[j][1].matrix() * obs[j][0].matrix();
    factors[j] = Complex(0, 0.5) * comm;
  }
  return HermitianMatrix(parity_sum(factors, 0));
}

double tradeoff_bound(const BellScenario& scenario, double t) {
  if (scenario.family() == BellFamily::kBiasedChsh) {
    double alpha = scenario.alpha();
    double radicand = alpha * alpha + t;
    if (radicand < 0.0) {
      throw PreconditionError("tradeoff_bound: alpha^2 + t is negative");
    }
    return 2.0 * std::sqrt(radicand);
  }
  if (t < -1.0) throw PreconditionError("tradeoff_bound: 1 + t is negative");
  return std::sqrt(std::exp2(scenario.parties() - 2) * (1.0 + t));
}

BetaBounds quantum_classical_bounds(const BellScenario& scenario) {
  if (scenario.family() == BellFamily::kBiasedChsh) {
    double alpha = scenario.alpha();
    return {2.0 * alpha, 2.0 * std::sqrt(alpha * alpha + 1.0)};
  }
  return {1.0, std::sqrt(std::exp2(scenario.parties() - 1))};
}

CorrelatorTensor chsh_coefficients(double alpha) {
  if (!(alpha >= 1.0)) throw PreconditionError("chsh_coefficients: alpha must be >= 1");
  CorrelatorTensor tensor;
  tensor.parties = 2;
  tensor.coeffs = {alpha, 1.0, alpha, -1.0};  // indices 00, 01, 10, 11
  return tensor;
}

CorrelatorTensor mabk_coefficients(int parties) {
  if (parties < 1) throw PreconditionError("mabk_coefficients: parties must be >= 1");
  std::vector<double> c = {1.0, 0.0};  // W_1 = A0
  for (int n = 2; n <= parties; ++n) {
    std::size_t prev = c.size();
    std::vector<double> next(prev * 2);
    for (std::size_t x = 0; x < prev; ++x) {
      double primed = c[~x & (prev - 1)];
      next[(x << 1) | 0] = 0.5 * (c[x] + primed);
      next[(x << 1) | 1] = 0.5 * (c[x] - primed);
    }
    c = std::move(next);
  }
  CorrelatorTensor tensor;
  tensor.parties = parties;
  tensor.coeffs = std::move(c);
  return tensor;
}

CorrelatorTensor scenario_coefficients(const BellScenario& scenario) {
  return scenario.family() == BellFamily::kBiasedChsh
             ? chsh_coefficients(scenario.alpha())
             : mabk_coefficients(scenario.parties());
}

CMatrix build_correlator_operator(const CorrelatorTensor& tensor,
                                  const std::vector<std::array<BinaryObservable, 2>>& obs) {
  if (static_cast<int>(obs.size()) != tensor.parties) {
    throw DimensionError("build_correlator_operator: party count mismatch");
  }
  const int n = tensor.parties;
  Eigen::Index total = 1;
  for (const auto& pair : obs) total *= pair[0].dim();

  CMatrix w = CMatrix::Zero(total, total);
  std::vector<CMatrix> slots(n);
  for (std::uint64_t mask = 0; mask < tensor.coeffs.size(); ++mask) {
    if (tensor.coeffs[mask] == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      slots[j] = obs[j][(mask >> (n - 1 - j)) & 1ull].matrix();
    }
    w += tensor.coeffs[mask] * kron_list(slots);
  }
  return w;
}

}  // namespace bellcert

#include "bellcert/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <utility>

namespace bellcert {

namespace {

BellScenario scenario_with_dims(const BellScenario& scenario,
                                const std::vector<Eigen::Index>& dims) {
  return scenario.family() == BellFamily::kBiasedChsh
             ? BellScenario::biased_chsh(scenario.alpha(), dims)
             : BellScenario::mabk(scenario.parties(), dims);
}

// First eigenvector of the top degenerate cluster; deterministic tie-break.
CVector top_state(const CMatrix& w) {
  EigDecomposition eig = eig_hermitian(HermitianMatrix(w));
  auto clusters = eigenvalue_clusters(eig.eigenvalues);
  return eig.eigenvectors.col(clusters.back().first);
}

// F with tr(X F) = contribution of observable (party, setting) = X to the
// Bell value; the optimal binary replacement is the eigenvalue sign of F.
CMatrix effective_local_operator(const CorrelatorTensor& tensor,
                                 const std::vector<std::array<BinaryObservable, 2>>& obs,
                                 const CMatrix& rho,
                                 const std::vector<Eigen::Index>& dims, int party,
                                 int setting) {
  const int n = tensor.parties;
  CMatrix f = CMatrix::Zero(dims[party], dims[party]);
  std::vector<CMatrix> slots(n);
  for (std::uint64_t mask = 0; mask < tensor.coeffs.size(); ++mask) {
    if (tensor.coeffs[mask] == 0.0) continue;
    if (static_cast<int>((mask >> (n - 1 - party)) & 1ull) != setting) continue;
    for (int j = 0; j < n; ++j) {
      slots[j] = (j == party) ? identity(dims[j])
                              : obs[j][(mask >> (n - 1 - j)) & 1ull].matrix();
    }
    f += tensor.coeffs[mask] * partial_trace(kron_list(slots) * rho, dims, {party});
  }
  return 0.5 * (f + f.adjoint());
}

struct RestartOutcome {
  double beta = -std::numeric_limits<double>::infinity();
  bool converged = false;
  int iterations = 0;
  std::vector<double> beta_trace;
  std::vector<std::array<BinaryObservable, 2>> obs;
  CMatrix rho;
};

RestartOutcome run_restart(const CorrelatorTensor& tensor,
                           const std::vector<Eigen::Index>& dims,
                           const SeesawConfig& config, std::uint64_t seed) {
  SplitMix64 rng(seed);
  const int n = tensor.parties;

  RestartOutcome out;
  for (int k = 0; k < n; ++k) {
    out.obs.push_back({random_binary_observable(dims[k], true, rng),
                       random_binary_observable(dims[k], true, rng)});
  }

  CMatrix w = build_correlator_operator(tensor, out.obs);
  double beta_prev = -std::numeric_limits<double>::infinity();
  for (int iter = 1; iter <= config.max_iterations; ++iter) {
    CVector state = top_state(w);
    CMatrix rho = state * state.adjoint();
    for (int k = 0; k < n; ++k) {
      for (int s = 0; s < 2; ++s) {
        CMatrix f = effective_local_operator(tensor, out.obs, rho, dims, k, s);
        out.obs[k][s] = project_to_projective(HermitianMatrix(f));
      }
    }
    w = build_correlator_operator(tensor, out.obs);
    double beta = (w * rho).trace().real();
    out.beta = beta;
    out.rho = rho;
    out.iterations = iter;
    out.beta_trace.push_back(beta);
    if (beta - beta_prev < config.convergence_tol) {
      out.converged = true;
      break;
    }
    beta_prev = beta;
  }
  // One final state step: the value the next iteration would accept.
  CVector state = top_state(w);
  out.rho = state * state.adjoint();
  out.beta = (w * out.rho).trace().real();
  out.beta_trace.push_back(out.beta);
  return out;
}

}  // namespace

SeesawResult seesaw_max_violation(const BellScenario& scenario,
                                  const std::vector<Eigen::Index>& dims,
                                  const SeesawConfig& config) {
  if (config.max_iterations < 1) throw PreconditionError("seesaw: max_iterations must be >= 1");
  if (!(config.convergence_tol > 0.0)) throw PreconditionError("seesaw: convergence_tol must be > 0");
  if (config.restarts < 1) throw PreconditionError("seesaw: restarts must be >= 1");

  BellScenario working = scenario_with_dims(scenario, dims);
  CorrelatorTensor tensor = scenario_coefficients(working);

  std::optional<RestartOutcome> best;
  std::uint64_t best_seed = 0;
  for (int r = 0; r < config.restarts; ++r) {
    std::uint64_t seed = config.seed + static_cast<std::uint64_t>(r);
    RestartOutcome out = run_restart(tensor, dims, config, seed);
    if (!best || out.beta > best->beta) {
      best = std::move(out);
      best_seed = seed;
    }
  }

  SeesawResult result{best->beta,
                      best->converged,
                      best->iterations,
                      best_seed,
                      std::move(best->beta_trace),
                      BellRealization(working, std::move(best->obs),
                                      DensityMatrix(0.5 * (best->rho + best->rho.adjoint())))};
  return result;
}

std::string TradeoffCurve::to_csv() const {
  std::string csv = "gamma,t,beta,bound\n";
  char line[160];
  for (const Row& row : rows) {
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g\n", row.gamma, row.t,
                  row.beta, row.bound);
    csv += line;
  }
  return csv;
}

TradeoffCurve scan_tradeoff(const BellScenario& scenario, int party_index,
                            const std::vector<double>& gamma_grid) {
  const int n = scenario.parties();
  if (party_index < 0 || party_index >= n) {
    throw PreconditionError("scan_tradeoff: party index out of range");
  }
  const bool chsh = scenario.family() == BellFamily::kBiasedChsh;
  if (chsh && party_index != 0) {
    throw PreconditionError("scan_tradeoff: the biased family is probed on party 0");
  }
  for (Eigen::Index d : scenario.party_dims()) {
    if (d != 2) {
      throw PreconditionError("scan_tradeoff: tight families are qubit constructions");
    }
  }
  for (double gamma : gamma_grid) {
    if (!(gamma >= 0.0 && gamma <= M_PI_2)) {
      throw PreconditionError("scan_tradeoff: gamma grid must lie in [0, pi/2]");
    }
  }

  TradeoffCurve curve;
  for (double gamma : gamma_grid) {
    std::vector<std::array<BinaryObservable, 2>> obs;
    CMatrix tilted = std::cos(gamma) * pauli_x() + std::sin(gamma) * pauli_y();
    for (int k = 0; k < n; ++k) {
      CMatrix second = (k == party_index) ? tilted : pauli_y();
      obs.push_back({BinaryObservable(pauli_x()), BinaryObservable(second)});
    }

    BellRealization realization(
        scenario, obs, [&] {
          HermitianMatrix w = chsh ? build_chsh_alpha(obs[0][0], obs[0][1], obs[1][0],
                                                      obs[1][1], scenario.alpha())
                                   : build_mabk(obs);
          CVector state = top_state(w.matrix());
          CMatrix rho = state * state.adjoint();
          return DensityMatrix(0.5 * (rho + rho.adjoint()));
        }());

    HermitianMatrix w = build_bell_operator(realization);
    TradeoffCurve::Row row;
    row.gamma = gamma;
    row.beta = bell_value(w, realization.state);
    CMatrix reduced =
        partial_trace(realization.state.matrix(), scenario.party_dims(), {party_index});
    DensityMatrix rho_k(0.5 * (reduced + reduced.adjoint()));
    row.t = chsh ? t_alpha(obs[0][0], obs[0][1], rho_k, scenario.alpha())
                 : effective_commutator(obs[party_index][0], obs[party_index][1], rho_k);
    row.bound = tradeoff_bound(scenario, row.t);
    curve.rows.push_back(row);
  }
  return curve;
}

namespace {

void record(FalsifyCheckStat& stat, double gap) {
  if (stat.runs == 0) stat.worst_gap = gap;
  ++stat.runs;
  stat.worst_gap = std::min(stat.worst_gap, gap);
  if (gap < -kPsdTol) ++stat.violations;
}

}  // namespace

FalsifyReport falsify_bounds(const BellScenario& scenario, int samples,
                             const std::vector<Eigen::Index>& dims, std::uint64_t seed) {
  if (samples < 1) throw PreconditionError("falsify_bounds: samples must be >= 1");
  BellScenario working = scenario_with_dims(scenario, dims);
  const bool chsh = working.family() == BellFamily::kBiasedChsh;
  const int n = working.parties();

  FalsifyReport report;
  report.seed = seed;
  report.samples = samples;
  std::vector<FalsifyCheckStat>& checks = report.checks;
  if (chsh) {
    checks = {{"chsh_squared_bound"}, {"talpha_bound"}, {"tradeoff"}, {"cauchy_schwarz"}};
  } else {
    checks = {{"mabk_commutator_bound"}, {"mabk_square_bound"}, {"tradeoff"}, {"cauchy_schwarz"}};
  }

  SplitMix64 rng(seed);
  for (int sample = 0; sample < samples; ++sample) {
    std::vector<std::array<BinaryObservable, 2>> obs;
    for (int k = 0; k < n; ++k) {
      bool projective = (rng.next_u64() & 1ull) != 0;
      obs.push_back({random_binary_observable(dims[k], projective, rng),
                     random_binary_observable(dims[k], projective, rng)});
    }
    DensityMatrix rho = random_density_matrix(working.joint_dim(), rng);
    BellRealization realization(working, obs, rho);
    HermitianMatrix w = build_bell_operator(realization);
    double beta = bell_value(w, rho);

    if (chsh) {
      BoundCheckResult square = verify_chsh_squared_bound(obs[0][0], obs[0][1], obs[1][0],
                                                          obs[1][1], working.alpha());
      record(checks[0], square.gap_min_eig);
      BoundCheckResult talpha = verify_talpha_bound(obs[0][0], obs[0][1], working.alpha());
      record(checks[1], talpha.gap_min_eig);
      CMatrix reduced = partial_trace(rho.matrix(), dims, {0});
      DensityMatrix rho_a(0.5 * (reduced + reduced.adjoint()));
      double t = t_alpha(obs[0][0], obs[0][1], rho_a, working.alpha());
      record(checks[2], tradeoff_bound(working, t) - std::abs(beta));
    } else {
      MabkBoundChecks mabk = verify_mabk_bounds(obs);
      record(checks[0], mabk.commutator_bound.gap_min_eig);
      record(checks[1], mabk.square_bound.gap_min_eig);
      for (int k = 0; k < n; ++k) {
        CMatrix reduced = partial_trace(rho.matrix(), dims, {k});
        DensityMatrix rho_k(0.5 * (reduced + reduced.adjoint()));
        double t = effective_commutator(obs[k][0], obs[k][1], rho_k);
        record(checks[2], tradeoff_bound(working, t) - std::abs(beta));
      }
    }
    double second_moment = (w.matrix() * w.matrix() * rho.matrix()).trace().real();
    record(checks[3], std::sqrt(std::max(second_moment, 0.0)) - std::abs(beta));
  }

  report.total_violations = 0;
  report.worst_gap = std::numeric_limits<double>::infinity();
  for (const FalsifyCheckStat& stat : checks) {
    report.total_violations += stat.violations;
    report.worst_gap = std::min(report.worst_gap, stat.worst_gap);
  }
  return report;
}

}  // namespace bellcert

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bellcert/bell.hpp"

namespace bellcert {

struct SeesawConfig {
  int max_iterations = 500;
  double convergence_tol = 1e-12;
  int restarts = 10;
  std::uint64_t seed = 0;
};

struct SeesawResult {
  double beta = 0.0;
  bool converged = false;
  int iterations = 0;               // of the winning restart
  std::uint64_t winning_seed = 0;   // base seed + restart index
  std::vector<double> beta_trace;   // accepted values of the winning restart
  BellRealization realization;
};

// Alternating maximization of the Bell value: state step takes the projector
// onto the top eigenvector of W (first solver vector of a degenerate top
// cluster); observable step replaces each observable by the eigenvalue sign
// of its effective local operator, the maximizer over binary observables.
// Every accepted value is nondecreasing. Restart r runs on seed + r; the
// best final value wins, seed order breaking ties.
SeesawResult seesaw_max_violation(const BellScenario& scenario,
                                  const std::vector<Eigen::Index>& dims,
                                  const SeesawConfig& config);

struct TradeoffCurve {
  struct Row {
    double gamma = 0.0;
    double t = 0.0;
    double beta = 0.0;
    double bound = 0.0;
  };
  std::vector<Row> rows;

  // Header gamma,t,beta,bound; 17-significant-digit floats.
  std::string to_csv() const;
};

// Tight single-parameter family: the probed party measures
// (sigma_x, cos(gamma) sigma_x + sin(gamma) sigma_y), the others stay at the
// canonical anticommuting pair; the state is the top eigenvector of W. Along
// this family the trade-off bound is met with equality.
TradeoffCurve scan_tradeoff(const BellScenario& scenario, int party_index,
                            const std::vector<double>& gamma_grid);

struct FalsifyCheckStat {
  std::string name;
  int runs = 0;
  int violations = 0;
  double worst_gap = 0.0;  // most negative = closest to (or past) violation
};

struct FalsifyReport {
  std::uint64_t seed = 0;
  int samples = 0;
  std::vector<FalsifyCheckStat> checks;
  int total_violations = 0;
  double worst_gap = 0.0;
};

// Random realizations (observables biased half projective / half generic,
// full-rank mixed states) hammered against every bound applicable to the
// family; a negative gap beyond tolerance counts as a violation.
FalsifyReport falsify_bounds(const BellScenario& scenario, int samples,
                             const std::vector<Eigen::Index>& dims, std::uint64_t seed);

}  // namespace bellcert

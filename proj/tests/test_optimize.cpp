#include <doctest.h>

#include <cmath>
#include <sstream>

#include "bellcert/optimize.hpp"
#include "helpers.hpp"

using namespace bellcert;
using bellcert::testing::qubit_dims;

namespace {

std::vector<double> linspace_half_pi(int points) {
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) {
    grid[i] = M_PI_2 * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return grid;
}

}  // namespace

TEST_CASE("seesaw_reaches_the_quantum_maximum_on_qubits") {
  SeesawConfig config;
  config.seed = 11;
  config.restarts = 8;

  struct Target {
    BellScenario scenario;
    double beta_q;
  };
  std::vector<Target> targets = {
      {BellScenario::biased_chsh(1.0, {2, 2}), 2.0 * std::sqrt(2.0)},
      {BellScenario::biased_chsh(2.0, {2, 2}), 2.0 * std::sqrt(5.0)},
      {BellScenario::mabk(3, qubit_dims(3)), 2.0},
  };
  for (const Target& target : targets) {
    SeesawResult r = seesaw_max_violation(target.scenario, target.scenario.party_dims(), config);
    CHECK(r.converged);
    CHECK(std::abs(r.beta - target.beta_q) < 1e-6);
    CHECK(r.beta <= target.beta_q + 1e-6);

    // accepted values never decrease
    for (std::size_t i = 1; i < r.beta_trace.size(); ++i) {
      CHECK(r.beta_trace[i] >= r.beta_trace[i - 1] - 1e-12);
    }

    // the reported realization reproduces the reported value
    double replay = bell_value(build_bell_operator(r.realization), r.realization.state);
    CHECK(replay == doctest::Approx(r.beta).epsilon(1e-9));
  }
}

TEST_CASE("seesaw_is_deterministic_for_a_fixed_seed") {
  SeesawConfig config;
  config.seed = 29;
  config.restarts = 3;
  BellScenario scenario = BellScenario::biased_chsh(1.5, {2, 2});
  SeesawResult a = seesaw_max_violation(scenario, {2, 2}, config);
  SeesawResult b = seesaw_max_violation(scenario, {2, 2}, config);
  CHECK(a.beta == b.beta);  // bit-exact
  CHECK(a.winning_seed == b.winning_seed);
  CHECK(a.iterations == b.iterations);
  CHECK(a.beta_trace == b.beta_trace);
}

TEST_CASE("scan_endpoints_hit_the_classical_and_quantum_points") {
  BellScenario scenario = BellScenario::biased_chsh(1.0, {2, 2});
  TradeoffCurve curve = scan_tradeoff(scenario, 0, linspace_half_pi(11));
  REQUIRE(curve.rows.size() == 11);

  const TradeoffCurve::Row& first = curve.rows.front();
  CHECK(first.gamma == doctest::Approx(0.0));
  CHECK(first.t == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(first.beta == doctest::Approx(2.0).epsilon(1e-10));

  const TradeoffCurve::Row& last = curve.rows.back();
  CHECK(last.gamma == doctest::Approx(M_PI_2));
  CHECK(last.t == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(last.beta == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-10));

  for (const TradeoffCurve::Row& row : curve.rows) {
    CHECK(std::abs(row.beta - row.bound) < 1e-8);  // the family is tight
  }
}

TEST_CASE("scan_known_interior_points") {
  // for alpha > 1 the peak sits at theta_alpha, not at gamma = pi/2
  double theta = bellcert::testing::theta_of(1.5);
  TradeoffCurve biased =
      scan_tradeoff(BellScenario::biased_chsh(1.5, {2, 2}), 0, {0.0, theta, M_PI_2});
  CHECK(biased.rows[0].beta == doctest::Approx(3.0).epsilon(1e-10));  // 2 alpha
  CHECK(biased.rows[1].beta == doctest::Approx(2.0 * std::sqrt(3.25)).epsilon(1e-10));
  CHECK(biased.rows[1].t == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(biased.rows[2].beta == doctest::Approx(std::sqrt(12.5)).epsilon(1e-10));

  TradeoffCurve parity =
      scan_tradeoff(BellScenario::mabk(3, qubit_dims(3)), 1, {M_PI / 6.0});
  CHECK(parity.rows[0].t == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(parity.rows[0].beta == doctest::Approx(std::sqrt(3.0)).epsilon(1e-10));
  CHECK(parity.rows[0].bound == doctest::Approx(std::sqrt(3.0)).epsilon(1e-10));
}

TEST_CASE("scan_rejects_out_of_range_parameters") {
  BellScenario chsh = BellScenario::biased_chsh(1.0, {2, 2});
  CHECK_THROWS_AS(scan_tradeoff(chsh, 1, {0.0}), PreconditionError);  // bias sits on party 0
  CHECK_THROWS_AS(scan_tradeoff(chsh, 0, {-0.1}), PreconditionError);
  CHECK_THROWS_AS(scan_tradeoff(chsh, 0, {M_PI_2 + 0.1}), PreconditionError);
  CHECK_THROWS_AS(scan_tradeoff(BellScenario::mabk(3, qubit_dims(3)), 3, {0.0}),
                  PreconditionError);
}

TEST_CASE("csv_round_trips_at_full_precision") {
  TradeoffCurve curve = scan_tradeoff(BellScenario::biased_chsh(1.0, {2, 2}), 0,
                                      linspace_half_pi(5));
  std::istringstream csv(curve.to_csv());
  std::string line;
  REQUIRE(std::getline(csv, line));
  CHECK(line == "gamma,t,beta,bound");
  int rows = 0;
  while (std::getline(csv, line)) {
    std::istringstream fields(line);
    std::string cell;
    std::vector<double> values;
    while (std::getline(fields, cell, ',')) values.push_back(std::stod(cell));
    REQUIRE(values.size() == 4);
    CHECK(values[0] == curve.rows[rows].gamma);  // 17 digits reproduce the double
    CHECK(values[1] == curve.rows[rows].t);
    CHECK(values[2] == curve.rows[rows].beta);
    CHECK(values[3] == curve.rows[rows].bound);
    ++rows;
  }
  CHECK(rows == 5);
}

TEST_CASE("falsify_finds_no_counterexamples") {
  FalsifyReport biased = falsify_bounds(BellScenario::biased_chsh(1.5, {2, 2}), 50, {2, 2}, 17);
  CHECK(biased.seed == 17);
  CHECK(biased.samples == 50);
  CHECK(biased.total_violations == 0);
  REQUIRE(!biased.checks.empty());
  for (const FalsifyCheckStat& stat : biased.checks) {
    CHECK(stat.runs == 50);
    CHECK(stat.violations == 0);
  }

  FalsifyReport parity = falsify_bounds(BellScenario::mabk(3, qubit_dims(3)), 30,
                                        qubit_dims(3), 23);
  CHECK(parity.total_violations == 0);
  // the trade-off check fires once per party, the operator checks once per sample
  for (const FalsifyCheckStat& stat : parity.checks) {
    CHECK(stat.runs == (stat.name == "tradeoff" ? 90 : 30));
  }

  // determinism: same seed, same numbers
  FalsifyReport again = falsify_bounds(BellScenario::biased_chsh(1.5, {2, 2}), 50, {2, 2}, 17);
  CHECK(again.worst_gap == biased.worst_gap);
}

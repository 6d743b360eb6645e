#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "bellcert/errors.hpp"
#include "bellcert/json_io.hpp"

namespace {

using namespace bellcert;

struct CommonFlags {
  double tol = 1e-8;
  std::string output;  // empty = stdout
  std::string format;  // empty = command default
  std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool seed_required) {
  cmd->add_option("--tol", flags.tol, "numerical tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--output", flags.output, "output path (default stdout)");
  cmd->add_option("--format", flags.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  CLI::Option* seed = cmd->add_option("--seed", flags.seed, "64-bit generator seed");
  if (seed_required) seed->required();
}

Json read_json(const std::string& path) {
  if (path == "-") {
    return Json::parse(std::cin);
  }
  std::ifstream in(path);
  if (!in) {
    throw SchemaError("cannot open input file: " + path);
  }
  return Json::parse(in);
}

void emit(std::string text, const std::string& output) {
  if (text.empty() || text.back() != '\n') text += '\n';
  if (output.empty() || output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(output, std::ios::binary);
  if (!out) {
    throw PreconditionError("cannot open output file: " + output);
  }
  out << text;
}

void require_json_format(const CommonFlags& flags) {
  if (!flags.format.empty() && flags.format != "json") {
    throw SchemaError("this command only emits json");
  }
}

// Everything here runs dense eigensolvers; keep the joint space at laptop
// scale so no command silently takes hours.
void enforce_desk_scale(const BellScenario& scenario) {
  if (scenario.parties() > 10 || scenario.joint_dim() > (Eigen::Index(1) << 10)) {
    throw PreconditionError("joint dimension exceeds the 2^10 cap");
  }
}

std::vector<std::array<BinaryObservable, 2>> parse_observable_pairs(const Json& j) {
  if (!j.is_array() || j.empty()) {
    throw SchemaError("expected a non-empty array of observable pairs");
  }
  std::vector<std::array<BinaryObservable, 2>> obs;
  for (const Json& pair : j) {
    if (!pair.is_array() || pair.size() != 2) {
      throw SchemaError("each party needs exactly two observables");
    }
    obs.push_back({observable_from_json(pair[0]), observable_from_json(pair[1])});
  }
  return obs;
}

HermitianMatrix build_from_parts(const BellScenario& scenario,
                                 const std::vector<std::array<BinaryObservable, 2>>& obs) {
  if (scenario.family() == BellFamily::kBiasedChsh) {
    return build_chsh_alpha(obs[0][0], obs[0][1], obs[1][0], obs[1][1], scenario.alpha());
  }
  return build_mabk(obs);
}

std::string family_name(const BellScenario& scenario) {
  return scenario.family() == BellFamily::kBiasedChsh ? "biased_chsh" : "mabk";
}

std::vector<Eigen::Index> resolve_dims(const std::vector<int>& flag, int parties) {
  if (flag.empty()) {
    return std::vector<Eigen::Index>(parties, 2);
  }
  if (static_cast<int>(flag.size()) != parties) {
    throw DimensionError("--dims needs one entry per party");
  }
  std::vector<Eigen::Index> dims;
  for (int d : flag) {
    if (d < 2) throw PreconditionError("party dimensions must be at least 2");
    dims.push_back(d);
  }
  return dims;
}

BellScenario load_scenario(const std::string& path, const std::vector<int>& dims_flag) {
  Json j = read_json(path);
  int parties = scenario_party_count(j);
  if (parties > 10) {
    throw PreconditionError("party count exceeds the cap of 10");
  }
  BellScenario scenario = scenario_from_json(j, resolve_dims(dims_flag, parties));
  enforce_desk_scale(scenario);
  return scenario;
}

int run_build(const std::string& scenario_path, const std::string& observables_path,
              const CommonFlags& flags) {
  require_json_format(flags);
  auto obs = parse_observable_pairs(read_json(observables_path));
  std::vector<Eigen::Index> dims;
  for (const auto& pair : obs) dims.push_back(pair[0].dim());
  BellScenario scenario = scenario_from_json(read_json(scenario_path), dims);
  enforce_desk_scale(scenario);
  HermitianMatrix w = build_from_parts(scenario, obs);
  Json out = matrix_to_json(w.matrix());
  out["family"] = family_name(scenario);
  out["norm"] = op_norm(w.matrix());
  emit(out.dump(2), flags.output);
  return 0;
}

int run_verify(const std::string& realization_path, const CommonFlags& flags) {
  require_json_format(flags);
  BellRealization r = realization_from_json(read_json(realization_path));
  enforce_desk_scale(r.scenario);
  const bool chsh = r.scenario.family() == BellFamily::kBiasedChsh;

  HermitianMatrix w = build_bell_operator(r);
  double beta = bell_value(w, r.state);
  BetaBounds bounds = quantum_classical_bounds(r.scenario);
  double scale = std::max(1.0, bounds.quantum);

  Json checks = Json::array();
  auto push = [&checks](const std::string& name, const BoundCheckResult& result) {
    Json entry = bound_check_to_json(result);
    entry["name"] = name;
    checks.push_back(std::move(entry));
  };
  if (chsh) {
    push("chsh_squared_bound",
         verify_chsh_squared_bound(r.observables[0][0], r.observables[0][1],
                                   r.observables[1][0], r.observables[1][1],
                                   r.scenario.alpha(), flags.tol));
    push("talpha_bound", verify_talpha_bound(r.observables[0][0], r.observables[0][1],
                                             r.scenario.alpha(), flags.tol));
  } else {
    MabkBoundChecks mabk = verify_mabk_bounds(r.observables, flags.tol);
    push("mabk_commutator_bound", mabk.commutator_bound);
    push("mabk_square_bound", mabk.square_bound);
  }

  // Scalar consequences of the operator bounds, checked directly on the state.
  const auto& dims = r.scenario.party_dims();
  double t_probe = 0.0;
  if (chsh) {
    CMatrix red = partial_trace(r.state.matrix(), dims, {0});
    t_probe = t_alpha(r.observables[0][0], r.observables[0][1],
                      DensityMatrix(CMatrix(0.5 * (red + red.adjoint()))), r.scenario.alpha());
  } else {
    t_probe = 2.0;
    for (int k = 0; k < r.scenario.parties(); ++k) {
      CMatrix red = partial_trace(r.state.matrix(), dims, {k});
      t_probe = std::min(
          t_probe, effective_commutator_raw(r.observables[k][0], r.observables[k][1],
                                            DensityMatrix(CMatrix(0.5 * (red + red.adjoint())))));
    }
  }
  double t_clamped = std::min(t_probe, 1.0);
  if (!chsh) t_clamped = std::max(t_clamped, 0.0);
  double cap = tradeoff_bound(r.scenario, t_clamped);
  Json tradeoff{{"name", "tradeoff"},
                {"lhs_max_eig", beta},
                {"gap_min_eig", cap - beta},
                {"passed", beta <= cap + 10.0 * flags.tol * scale}};
  checks.push_back(std::move(tradeoff));

  double second_moment =
      (w.matrix() * w.matrix() * r.state.matrix()).trace().real();
  double cs_gap = std::sqrt(std::max(second_moment, 0.0)) - std::abs(beta);
  checks.push_back(Json{{"name", "cauchy_schwarz"},
                        {"lhs_max_eig", std::abs(beta)},
                        {"gap_min_eig", cs_gap},
                        {"passed", cs_gap >= -flags.tol * scale}});

  bool passed = true;
  for (const Json& c : checks) passed = passed && c.at("passed").get<bool>();
  Json out{{"family", family_name(r.scenario)},
           {"beta", beta},
           {"classical_bound", bounds.classical},
           {"quantum_bound", bounds.quantum},
           {"t_probe", t_probe},
           {"checks", std::move(checks)},
           {"passed", passed}};
  emit(out.dump(2), flags.output);
  return passed ? 0 : 1;
}

int run_certify(const std::string& realization_path, bool include_unitaries,
                const CommonFlags& flags) {
  require_json_format(flags);
  BellRealization r = realization_from_json(read_json(realization_path));
  enforce_desk_scale(r.scenario);
  CertificationReport report = build_certification_report(r, flags.tol);
  emit(certification_report_to_json(report, include_unitaries).dump(2), flags.output);
  return report.certified ? 0 : 1;
}

int run_scan(const std::string& scenario_path, int grid, int party,
             const CommonFlags& flags) {
  if (grid < 2) {
    throw PreconditionError("--grid needs at least 2 points");
  }
  BellScenario scenario = load_scenario(scenario_path, {});
  std::vector<double> gammas;
  for (int i = 0; i < grid; ++i) {
    gammas.push_back(M_PI_2 * static_cast<double>(i) / static_cast<double>(grid - 1));
  }
  TradeoffCurve curve = scan_tradeoff(scenario, party, gammas);
  if (flags.format == "json") {
    Json rows = Json::array();
    for (const TradeoffCurve::Row& row : curve.rows) {
      rows.push_back(Json{{"gamma", row.gamma},
                          {"t", row.t},
                          {"beta", row.beta},
                          {"bound", row.bound}});
    }
    emit(Json{{"rows", std::move(rows)}}.dump(2), flags.output);
  } else {
    emit(curve.to_csv(), flags.output);
  }
  return 0;
}

int run_seesaw(const std::string& scenario_path, const std::vector<int>& dims_flag,
               int restarts, int max_iterations, const CommonFlags& flags) {
  require_json_format(flags);
  if (restarts < 1 || max_iterations < 1) {
    throw PreconditionError("--restarts and --max-iterations must be positive");
  }
  BellScenario scenario = load_scenario(scenario_path, dims_flag);
  SeesawConfig config;
  config.max_iterations = max_iterations;
  config.restarts = restarts;
  config.seed = flags.seed;
  SeesawResult result = seesaw_max_violation(scenario, scenario.party_dims(), config);
  emit(seesaw_result_to_json(result).dump(2), flags.output);
  return 0;
}

int run_falsify(const std::string& scenario_path, const std::vector<int>& dims_flag,
                int samples, const CommonFlags& flags) {
  require_json_format(flags);
  if (samples < 1) {
    throw PreconditionError("--samples must be positive");
  }
  BellScenario scenario = load_scenario(scenario_path, dims_flag);
  FalsifyReport report =
      falsify_bounds(scenario, samples, scenario.party_dims(), flags.seed);
  emit(falsify_report_to_json(report).dump(2), flags.output);
  return report.total_violations == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bell operator toolkit: build family operators, verify operator bounds, "
               "certify near-maximal realizations, scan trade-off curves, and stress-test "
               "the inequalities"};
  app.require_subcommand(1);

  CommonFlags flags;

  std::string scenario_path, observables_path, realization_path;
  std::vector<int> dims_flag;
  int grid = 51, party = 0, restarts = 10, max_iterations = 500, samples = 100;
  bool include_unitaries = false;

  CLI::App* build = app.add_subcommand("build", "assemble the family operator from parts");
  build->add_option("scenario", scenario_path, "scenario json (- for stdin)")->required();
  build->add_option("observables", observables_path, "per-party observable pairs json")
      ->required();
  add_common(build, flags, false);

  CLI::App* verify = app.add_subcommand("verify", "check every operator bound on a realization");
  verify->add_option("realization", realization_path, "realization json (- for stdin)")
      ->required();
  add_common(verify, flags, false);

  CLI::App* certify =
      app.add_subcommand("certify", "certify the canonical structure of a near-maximal realization");
  certify->add_option("realization", realization_path, "realization json (- for stdin)")
      ->required();
  certify->add_flag("--unitaries", include_unitaries, "include extraction unitaries");
  add_common(certify, flags, false);

  CLI::App* scan = app.add_subcommand("scan", "trade-off curve along the tight family");
  scan->add_option("scenario", scenario_path, "scenario json (- for stdin)")->required();
  scan->add_option("--grid", grid, "number of gamma points on [0, pi/2]");
  scan->add_option("--party", party, "probed party index");
  add_common(scan, flags, false);

  CLI::App* seesaw = app.add_subcommand("seesaw", "alternating maximization of the value");
  seesaw->add_option("scenario", scenario_path, "scenario json (- for stdin)")->required();
  seesaw->add_option("--dims", dims_flag, "per-party dimensions (default all 2)")
      ->delimiter(',');
  seesaw->add_option("--restarts", restarts, "independent random restarts");
  seesaw->add_option("--max-iterations", max_iterations, "sweep cap per restart");
  add_common(seesaw, flags, true);

  CLI::App* falsify = app.add_subcommand("falsify", "random search for bound violations");
  falsify->add_option("scenario", scenario_path, "scenario json (- for stdin)")->required();
  falsify->add_option("--dims", dims_flag, "per-party dimensions (default all 2)")
      ->delimiter(',');
  falsify->add_option("--samples", samples, "number of random realizations");
  add_common(falsify, flags, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (build->parsed()) return run_build(scenario_path, observables_path, flags);
    if (verify->parsed()) return run_verify(realization_path, flags);
    if (certify->parsed()) return run_certify(realization_path, include_unitaries, flags);
    if (scan->parsed()) return run_scan(scenario_path, grid, party, flags);
    if (seesaw->parsed())
      return run_seesaw(scenario_path, dims_flag, restarts, max_iterations, flags);
    if (falsify->parsed()) return run_falsify(scenario_path, dims_flag, samples, flags);
  } catch (const Json::parse_error& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 2;
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 2;
  } catch (const DimensionError& e) {
    std::cerr << "dimension error: " << e.what() << "\n";
    return 3;
  } catch (const CertificationError& e) {
    std::cerr << "certification failed: " << e.what() << "\n";
    return 1;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}

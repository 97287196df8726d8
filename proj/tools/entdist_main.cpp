#include "entdist/io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace entdist;

const std::vector<double> kUniquenessMargins = {1e-2, 1e-3, 1e-4, 1e-6, 1e-9};

Matrix phi_plus_projector() {
  const Vector v = (basis_ket(0, 4) + basis_ket(3, 4)) / std::sqrt(2.0);
  return v * v.adjoint();
}

// Final two-qubit state of the deterministic run at the original parameters.
Matrix expected_final_state_at_fixture() {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = 1.0 / 2.0;
  m(1, 1) = 0.0;
  m(2, 2) = 1.0 / 3.0;
  m(3, 3) = 1.0 / 6.0;
  m(0, 3) = m(3, 0) = 1.0 / 6.0;
  return m;
}

int cmd_analyze(const std::vector<double>& lam, const std::string& params_path,
                double trace_tol, const std::string& out_path) {
  if (lam.empty() == params_path.empty()) {
    std::cerr << "analyze: provide exactly one of --lam or --params\n";
    return 2;
  }
  const DurParams p =
      lam.empty() ? load_params_file(params_path, trace_tol)
                  : DurParams::validated(lam[0], lam[1], lam[2], lam[3], lam[4],
                                         trace_tol);

  const ConditionReport rep = check_conditions(p);
  const ProcedureTrace trace = run_probabilistic(p);
  const double avg_closed = avg_entanglement_closed(p);
  const double avg_oracle = avg_entanglement_oracle(p);
  const double det_closed = deterministic_negativity_closed(p);
  const double det_oracle = deterministic_negativity_oracle(p);

  Json out{{"params", params_to_json(p)},
           {"delta", round_sig15(p.delta())},
           {"delta_sum", round_sig15(p.delta_sum())},
           {"p_e", round_sig15(trace.p_e)},
           {"conditions", condition_report_to_json(rep)},
           {"avg_entanglement",
            Json{{"closed", round_sig15(std::max(avg_closed, 0.0))},
                 {"closed_unclamped", round_sig15(avg_closed)},
                 {"oracle", round_sig15(avg_oracle)}}},
           {"deterministic_negativity",
            Json{{"closed", round_sig15(det_closed)},
                 {"oracle", round_sig15(det_oracle)}}},
           {"residuals",
            Json{{"avg", round_sig15(std::abs(std::max(avg_closed, 0.0) - avg_oracle))},
                 {"deterministic", round_sig15(std::abs(det_closed - det_oracle))}}},
           {"assumptions",
            Json::array({"ppt-implies-separability-within-family"})}};
  write_text(out_path, out.dump(2) + "\n");
  return 0;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, int count,
               int samples_per_delta, const std::string& out_path) {
  const bool all = suite == "all";
  if (!all && suite != "t1" && suite != "t2" && suite != "t3" &&
      suite != "t4" && suite != "uniqueness" && suite != "structural") {
    std::cerr << "verify: unknown suite '" << suite << "'\n";
    return 2;
  }
  if (count < 1 || samples_per_delta < 1) {
    std::cerr << "verify: --count and --samples-per-delta must be >= 1\n";
    return 2;
  }

  std::vector<DurParams> samples;
  if (all || suite == "t1" || suite == "t2" || suite == "t3" || suite == "t4") {
    samples = sample_params(seed, count);
  }
  const std::vector<double> slice_grid = tightness_grid(8);

  std::vector<CheckResult> checks;
  auto append = [&checks](std::vector<CheckResult> more) {
    for (auto& c : more) checks.push_back(std::move(c));
  };

  if (all || suite == "t1") append(verify_membership_iff(samples));
  if (all || suite == "t2") append(verify_gap_bound(samples, 100));
  if (all || suite == "t3") {
    append(verify_probabilistic_optimality(slice_grid, samples_per_delta, seed));
    checks.push_back(verify_avg_closed_form(samples));
  }
  if (all || suite == "t4") {
    append(verify_deterministic_optimality(slice_grid, samples_per_delta, seed));
    append(verify_final_closed_form(samples));
    append(verify_envelope());
  }
  if (all || suite == "uniqueness") {
    append(verify_uniqueness(kUniquenessMargins, 1e-3));
  }
  if (all || suite == "structural") {
    append(verify_structural(seed, std::min(count, 2000)));
  }

  bool all_passed = true;
  for (const CheckResult& c : checks) all_passed = all_passed && c.passed;
  write_text(out_path,
             report_to_json(suite, seed, count, checks).dump(2) + "\n");
  return all_passed ? 0 : 1;
}

int cmd_sweep(double delta_min, double delta_max, int steps,
              int samples_per_delta, std::uint64_t seed,
              const std::string& format, const std::string& out_path) {
  const std::vector<SweepRow> rows =
      run_sweep(delta_min, delta_max, steps, samples_per_delta, seed);
  if (format == "csv") {
    write_text(out_path, sweep_csv(rows));
  } else {
    write_text(out_path, sweep_json(rows, seed).dump(2) + "\n");
  }
  return 0;
}

int cmd_sample(std::uint64_t seed, int count, const std::string& out_path) {
  const std::vector<DurParams> samples = sample_params(seed, count);
  Json list = Json::array();
  for (const DurParams& p : samples) list.push_back(params_to_json(p));
  const Json out{{"seed", seed}, {"count", count}, {"samples", list}};
  write_text(out_path, out.dump(2) + "\n");
  return 0;
}

std::vector<CheckResult> reproduce_checks() {
  std::vector<CheckResult> checks;
  const DurParams fixture = rho_prime_params();

  {
    CheckResult c{"prepared-state-roundtrip"};
    c.checked = 1;
    const Matrix gate = cnot(0, 2, 3);
    const double resid =
        max_abs_diff(apply_unitary(build_sigma(fixture), gate).matrix(),
                     build_rho(fixture).matrix());
    c.residual(resid);
    if (resid > kStructuralTol) {
      c.fail(0, fixture, "prepared state does not round-trip through CNOT(a->c)");
    }
    checks.push_back(std::move(c));
  }
  {
    CheckResult c{"max-entangled-extraction"};
    c.checked = 1;
    const auto [kept, dropped] = measure_qubit(build_tau(fixture), 2);
    const double prob_err = std::abs(kept.probability - 1.0 / 3.0);
    const double state_err =
        kept.degenerate ? 1.0
                        : max_abs_diff(kept.post_state->matrix(), phi_plus_projector());
    c.residual(std::max(prob_err, state_err));
    if (prob_err > kStructuralTol || state_err > kStructuralTol) {
      c.fail(0, fixture, "extraction probability or branch state off");
    }
    checks.push_back(std::move(c));
  }
  {
    CheckResult c{"deterministic-final-state"};
    c.checked = 1;
    const double resid = max_abs_diff(run_deterministic(fixture).matrix(),
                                      expected_final_state_at_fixture());
    c.residual(resid);
    if (resid > kStructuralTol) {
      c.fail(0, fixture, "final state differs from its closed form");
    }
    checks.push_back(std::move(c));
  }
  {
    CheckResult c{"probabilistic-max-value"};
    c.checked = 1;
    const double closed_err =
        std::abs(avg_entanglement_closed(fixture) - 1.0 / 3.0);
    const double oracle_err =
        std::abs(avg_entanglement_oracle(fixture) - 1.0 / 3.0);
    c.residual(std::max(closed_err, oracle_err));
    if (closed_err > kStructuralTol || oracle_err > kSpectralTol) {
      c.fail(0, fixture, "probabilistic yield misses 1/3");
    }
    checks.push_back(std::move(c));
  }
  {
    CheckResult c{"deterministic-max-value"};
    c.checked = 1;
    const double target = (std::sqrt(2.0) - 1.0) / 3;
    const double closed_err =
        std::abs(deterministic_negativity_closed(fixture) - target);
    const double oracle_err =
        std::abs(deterministic_negativity_oracle(fixture) - target);
    c.residual(std::max(closed_err, oracle_err));
    if (closed_err > kSpectralTol || oracle_err > kSpectralTol) {
      c.fail(0, fixture, "deterministic negativity misses (sqrt(2)-1)/3");
    }
    checks.push_back(std::move(c));
  }
  {
    CheckResult c{"gap-bound-tightness"};
    for (double d : tightness_grid(100)) {
      ++c.checked;
      const DurParams e = extremal_params(d);
      if (!can_distribute(e) || !(e.delta() <= 1.0 / 3.0 + kStructuralTol)) {
        c.fail(c.checked, e, "extremal point leaves the distributing family");
      }
    }
    checks.push_back(std::move(c));
  }
  {
    CheckResult c{"unique-point-at-max-gap"};
    c.checked = 1;
    const UniquePoint unique = unique_max_gap_point();
    const double dist =
        std::max({std::abs(unique.params.lam0p - fixture.lam0p),
                  std::abs(unique.params.lam0m - fixture.lam0m),
                  std::abs(unique.params.lam1 - fixture.lam1),
                  std::abs(unique.params.lam2 - fixture.lam2),
                  std::abs(unique.params.lam3 - fixture.lam3)});
    c.residual(dist);
    if (!unique.unique || dist > 1e-15) {
      c.fail(0, unique.params, "constraint chain did not pin the original point");
    }
    checks.push_back(std::move(c));
  }
  return checks;
}

int cmd_reproduce(const std::string& out_path) {
  const std::vector<CheckResult> checks = reproduce_checks();
  bool all_passed = true;
  for (const CheckResult& c : checks) {
    all_passed = all_passed && c.passed;
    std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << c.name
              << " (worst residual " << format_sig15(c.worst_residual) << ")\n";
  }
  if (!out_path.empty()) {
    write_text(out_path, report_to_json("reproduce", 0, 0, checks).dump(2) + "\n");
  }
  return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement distribution over the four-parameter family of "
               "three-qubit separable states: analysis, verification suites, "
               "sweeps, and reproduction checks"};
  app.require_subcommand(1);

  auto* analyze = app.add_subcommand(
      "analyze", "Conditions, membership, and entanglement values for one point");
  std::vector<double> lam;
  std::string params_path;
  double trace_tol = kStructuralTol;
  std::string analyze_out;
  std::string analyze_format = "json";
  analyze->add_option("--lam", lam, "five weights: lam0p lam0m lam1 lam2 lam3")
      ->expected(5);
  analyze->add_option("--params", params_path, "JSON file with a flat params record");
  analyze->add_option("--trace-tol", trace_tol,
                      "tolerance override for the trace constraint");
  analyze->add_option("--out", analyze_out, "output path (default stdout)");
  analyze->add_option("--format", analyze_format)->check(CLI::IsMember({"json"}));

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  std::string suite = "all";
  std::uint64_t verify_seed = 0;
  int verify_count = 10000;
  int verify_per_delta = 1000;
  std::string verify_out;
  std::string verify_format = "json";
  verify->add_option("--suite", suite, "all|t1|t2|t3|t4|uniqueness|structural");
  verify->add_option("--seed", verify_seed, "sampling seed (echoed in the report)");
  verify->add_option("--count", verify_count, "number of simplex samples");
  verify->add_option("--samples-per-delta", verify_per_delta,
                     "conditioned samples per grid point");
  verify->add_option("--out", verify_out, "output path (default stdout)");
  verify->add_option("--format", verify_format)->check(CLI::IsMember({"json"}));

  auto* sweep = app.add_subcommand("sweep", "Sweep the gap range and emit rows");
  double delta_min = 0.05;
  double delta_max = 1.0 / 3.0;
  int steps = 8;
  int sweep_per_delta = 100;
  std::uint64_t sweep_seed = 0;
  std::string sweep_out;
  std::string sweep_format = "csv";
  sweep->add_option("--delta-min", delta_min, "lower end of the gap grid");
  sweep->add_option("--delta-max", delta_max, "upper end of the gap grid");
  sweep->add_option("--steps", steps, "number of grid points");
  sweep->add_option("--samples-per-delta", sweep_per_delta,
                    "conditioned samples per grid point (0 for extremal rows only)");
  sweep->add_option("--seed", sweep_seed, "sampling seed");
  sweep->add_option("--out", sweep_out, "output path (default stdout)");
  sweep->add_option("--format", sweep_format)->check(CLI::IsMember({"json", "csv"}));

  auto* sample = app.add_subcommand("sample", "Draw parameter samples as JSON");
  std::uint64_t sample_seed = 0;
  int sample_count = 100;
  std::string sample_out;
  std::string sample_format = "json";
  sample->add_option("--seed", sample_seed, "sampling seed (echoed in the output)");
  sample->add_option("--count", sample_count, "number of samples");
  sample->add_option("--out", sample_out, "output path (default stdout)");
  sample->add_option("--format", sample_format)->check(CLI::IsMember({"json"}));

  auto* reproduce = app.add_subcommand(
      "reproduce", "Run the fixed headline checklist of the original procedure");
  std::string reproduce_out;
  reproduce->add_option("--out", reproduce_out, "JSON report path (optional)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*analyze) {
      return cmd_analyze(lam, params_path, trace_tol, analyze_out);
    }
    if (*verify) {
      return cmd_verify(suite, verify_seed, verify_count, verify_per_delta,
                        verify_out);
    }
    if (*sweep) {
      return cmd_sweep(delta_min, delta_max, steps, sweep_per_delta, sweep_seed,
                       sweep_format, sweep_out);
    }
    if (*sample) {
      return cmd_sample(sample_seed, sample_count, sample_out);
    }
    if (*reproduce) {
      return cmd_reproduce(reproduce_out);
    }
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const contract_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

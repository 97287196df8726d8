#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

const std::string kCli = ENTDIST_CLI_PATH;

int run_cli(const std::string& args, const std::string& out_file) {
  const std::string cmd =
      "\"" + kCli + "\" " + args + " > " + out_file + " 2> " + out_file + ".err";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

nlohmann::json slurp_json(const std::string& path) {
  return nlohmann::json::parse(slurp(path));
}

}  // namespace

TEST_CASE("analyze reports the fixture point") {
  const int code = run_cli(
      "analyze --lam 0.33333333333333331 0 0.16666666666666666 0 "
      "0.16666666666666666",
      "cli_analyze_fixture.json");
  CHECK(code == 0);
  const auto r = slurp_json("cli_analyze_fixture.json");
  CHECK(r["conditions"]["can_distribute"] == true);
  CHECK(std::abs(r["p_e"].get<double>() - 1.0 / 3.0) <= 1e-9);
  CHECK(std::abs(r["deterministic_negativity"]["closed"].get<double>() -
                 0.1380711874576983) <= 1e-6);
  CHECK(std::abs(r["avg_entanglement"]["oracle"].get<double>() - 1.0 / 3.0) <=
        1e-9);
}

TEST_CASE("analyze classifies a zero-gap point without failing") {
  const int code =
      run_cli("analyze --lam 0.2 0.2 0.1 0.1 0.1", "cli_analyze_flat.json");
  CHECK(code == 0);
  const auto r = slurp_json("cli_analyze_flat.json");
  CHECK(std::abs(r["delta"].get<double>()) <= 1e-15);
  CHECK(r["conditions"]["can_distribute"] == false);
}

TEST_CASE("analyze exits 2 on a broken params file") {
  {
    std::ofstream f("cli_bad_params.json");
    f << "{\"lam0p\":0.3,\"lam0m\":0.1,\"lam1\":0.1,\"lam2\":0.1,\"lam3\":0.05}\n";
  }
  CHECK(run_cli("analyze --params cli_bad_params.json", "cli_bad_out.json") == 2);

  {
    std::ofstream f("cli_missing_field.json");
    f << "{\"lam0p\":0.3}\n";
  }
  CHECK(run_cli("analyze --params cli_missing_field.json", "cli_bad_out.json") ==
        2);
  CHECK(run_cli("analyze --params cli_nonexistent.json", "cli_bad_out.json") == 2);
}

TEST_CASE("analyze accepts a valid params file") {
  {
    std::ofstream f("cli_good_params.json");
    f << "{\"lam0p\":0.45,\"lam0m\":0.35,\"lam1\":0.05,\"lam2\":0.0,"
         "\"lam3\":0.05}\n";
  }
  const int code =
      run_cli("analyze --params cli_good_params.json", "cli_good_out.json");
  CHECK(code == 0);
  const auto r = slurp_json("cli_good_out.json");
  CHECK(std::abs(r["delta"].get<double>() - 0.1) <= 1e-12);
  CHECK(r["conditions"]["can_distribute"] == true);
}

TEST_CASE("ten-digit inputs need the documented tolerance override") {
  const std::string lam =
      "--lam 0.3333333333 0 0.1666666667 0 0.1666666667";
  CHECK(run_cli("analyze " + lam, "cli_tol_default.json") == 2);
  const int code =
      run_cli("analyze --trace-tol 1e-9 " + lam, "cli_tol_loose.json");
  CHECK(code == 0);
  const auto r = slurp_json("cli_tol_loose.json");
  CHECK(r["conditions"]["can_distribute"] == true);
  CHECK(std::abs(r["p_e"].get<double>() - 1.0 / 3.0) <= 1e-8);
}

TEST_CASE("verify runs a suite and reports machine-readably") {
  const int code = run_cli(
      "verify --suite t2 --seed 42 --count 2000 --out cli_verify_t2.json",
      "cli_verify_stdout.txt");
  CHECK(code == 0);
  const auto r = slurp_json("cli_verify_t2.json");
  CHECK(r["suite"] == "t2");
  CHECK(r["seed"] == 42);
  CHECK(r["all_passed"] == true);
  bool saw_tightness = false;
  for (const auto& c : r["checks"]) {
    CHECK(c["passed"] == true);
    saw_tightness = saw_tightness || c["name"] == "gap-tightness";
  }
  CHECK(saw_tightness);
}

TEST_CASE("verify rejects an unknown suite") {
  CHECK(run_cli("verify --suite bogus", "cli_verify_bogus.txt") == 2);
}

TEST_CASE("verify uniqueness pins the fixture point") {
  const int code = run_cli(
      "verify --suite uniqueness --out cli_verify_uni.json",
      "cli_verify_uni_stdout.txt");
  CHECK(code == 0);
  const auto r = slurp_json("cli_verify_uni.json");
  CHECK(r["all_passed"] == true);
}

TEST_CASE("sweep emits the pinned CSV schema deterministically") {
  const std::string flags =
      "sweep --delta-min 0.05 --delta-max 0.3 --steps 3 --samples-per-delta 4 "
      "--seed 9";
  CHECK(run_cli(flags + " --out cli_sweep_a.csv", "cli_sweep_stdout.txt") == 0);
  CHECK(run_cli(flags + " --out cli_sweep_b.csv", "cli_sweep_stdout.txt") == 0);
  const std::string a = slurp("cli_sweep_a.csv");
  CHECK(a == slurp("cli_sweep_b.csv"));

  std::istringstream lines(a);
  std::string header;
  std::getline(lines, header);
  CHECK(header ==
        "delta,p_e,neg_closed,neg_oracle,det_neg_closed,det_neg_oracle,"
        "residual_prob,residual_det");
  int rows = 0;
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 3 * 5);
}

TEST_CASE("sweep with zero samples keeps only extremal rows") {
  CHECK(run_cli(
            "sweep --delta-min 0.1 --delta-max 0.3 --steps 2 "
            "--samples-per-delta 0 --out cli_sweep_empty.csv",
            "cli_sweep_stdout.txt") == 0);
  std::istringstream lines(slurp("cli_sweep_empty.csv"));
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    if (!line.empty()) ++count;
  }
  CHECK(count == 1 + 2);
}

TEST_CASE("sweep validates the grid") {
  CHECK(run_cli("sweep --delta-min 0 --delta-max 0.3 --steps 2",
                "cli_sweep_bad.txt") == 2);
  CHECK(run_cli("sweep --delta-min 0.1 --delta-max 0.4 --steps 2",
                "cli_sweep_bad.txt") == 2);
  CHECK(run_cli("sweep --delta-min 0.1 --delta-max 0.3 --steps 2 --format xml",
                "cli_sweep_bad.txt") == 2);
}

TEST_CASE("sample output is deterministic and round-trips") {
  const std::string flags = "sample --seed 3 --count 5";
  CHECK(run_cli(flags + " --out cli_sample_a.json", "cli_sample_stdout.txt") == 0);
  CHECK(run_cli(flags + " --out cli_sample_b.json", "cli_sample_stdout.txt") == 0);
  CHECK(slurp("cli_sample_a.json") == slurp("cli_sample_b.json"));

  const auto r = slurp_json("cli_sample_a.json");
  CHECK(r["seed"] == 3);
  CHECK(r["samples"].size() == 5);
  // Each record feeds back through analyze.
  {
    std::ofstream f("cli_sample_one.json");
    f << r["samples"][0].dump() << "\n";
  }
  CHECK(run_cli("analyze --params cli_sample_one.json", "cli_sample_out.json") ==
        0);
}

TEST_CASE("unknown flags are rejected") {
  CHECK(run_cli("analyze --lam 1 0 0 0 0 --frobnicate", "cli_unknown.txt") == 2);
  CHECK(run_cli("", "cli_nosub.txt") == 2);
  // CSV exists only for sweeps.
  CHECK(run_cli("analyze --lam 1 0 0 0 0 --format csv", "cli_fmt.txt") == 2);
  CHECK(run_cli("verify --suite t2 --format csv", "cli_fmt.txt") == 2);
}

TEST_CASE("reproduce prints one line per headline check") {
  const int code = run_cli("reproduce --out cli_repro.json", "cli_repro.txt");
  CHECK(code == 0);
  const std::string text = slurp("cli_repro.txt");
  int pass_lines = 0;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.rfind("[PASS]", 0) == 0) ++pass_lines;
    CHECK(line.rfind("[FAIL]", 0) != 0);
  }
  CHECK(pass_lines == 7);
  const auto r = slurp_json("cli_repro.json");
  CHECK(r["all_passed"] == true);
  CHECK(r["checks"].size() == 7);
}

#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(GQFI_CLI_PATH) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  RunResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) res.out.append(buf.data(), n);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

double value_of(const std::string& out, const std::string& key) {
  std::istringstream ss(out);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.rfind(key + ": ", 0) == 0) return std::stod(line.substr(key.size() + 2));
  }
  FAIL("key not found: ", key, " in:\n", out);
  return 0.0;
}

std::string string_of(const std::string& out, const std::string& key) {
  std::istringstream ss(out);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.rfind(key + ": ", 0) == 0) return line.substr(key.size() + 2);
  }
  FAIL("key not found: ", key, " in:\n", out);
  return "";
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("gqfi_cli_test_" + name);
}

}  // namespace

TEST_CASE("eval: vacuum has zero advantage") {
  const RunResult r = run_cli("eval --nu 1 --gamma 0 --r1 0 --r2 0");
  CHECK(r.exit_code == 0);
  CHECK(value_of(r.out, "advantage") == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("eval: strong-displacement family point lands in regime 1") {
  const RunResult r = run_cli(
      "eval --nu 10 --gamma 100 --r1-db 10 --phi-tilde 1.5707963 --family appendix_d");
  CHECK(r.exit_code == 0);
  CHECK(string_of(r.out, "regime") == "1");
  CHECK(value_of(r.out, "advantage") > 0.0);
}

TEST_CASE("eval: displaced thermal sits exactly on the reference bound") {
  const RunResult r = run_cli("eval --nu 2 --gamma 5 --r1 0 --r2 0");
  CHECK(r.exit_code == 0);
  CHECK(value_of(r.out, "i_f_opt") == doctest::Approx(50.0).epsilon(1e-9));
  CHECK(value_of(r.out, "ftql") == doctest::Approx(50.0).epsilon(1e-12));
}

TEST_CASE("eval: invalid parameters exit with code 2") {
  CHECK(run_cli("eval --nu 0.5").exit_code == 2);
  CHECK(run_cli("eval --no-such-flag 1").exit_code == 2);
}

TEST_CASE("eval: json output is emitted on request") {
  const RunResult r = run_cli("--format json eval --nu 2 --gamma 1");
  CHECK(r.exit_code == 0);
  CHECK(r.out.front() == '{');
  CHECK(r.out.find("\"i_f_opt\":") != std::string::npos);
}

TEST_CASE("eval: config file supplies defaults, flags win") {
  const fs::path cfg = temp_file("eval.cfg");
  {
    std::ofstream f(cfg);
    f << "nu=2\ngamma=5\n";
  }
  const RunResult base = run_cli("eval --config " + cfg.string());
  CHECK(base.exit_code == 0);
  CHECK(value_of(base.out, "ftql") == doctest::Approx(50.0).epsilon(1e-12));

  const RunResult over = run_cli("eval --config " + cfg.string() + " --gamma 1");
  CHECK(over.exit_code == 0);
  CHECK(value_of(over.out, "ftql") == doctest::Approx(2.0).epsilon(1e-12));
  fs::remove(cfg);
}

TEST_CASE("certify: thermal state is internally consistent, exit 0") {
  const RunResult r = run_cli("certify --nu 3 --gamma 2 --r1 0 --r2 0");
  CHECK(r.exit_code == 0);
  CHECK(string_of(r.out, "case") == "displaced_thermal");
  CHECK(string_of(r.out, "consistent") == "true");
}

TEST_CASE("certify: squeezed non-pure state reports a positive gap") {
  const RunResult r = run_cli("certify --nu 2 --r1 0.8");
  CHECK(r.exit_code == 0);
  CHECK(value_of(r.out, "achieved_gap") > 0.0);
  CHECK(string_of(r.out, "ftql_attained_not_surpassed") == "false");
}

TEST_CASE("certify: pure aligned strong displacement flags the exception") {
  const RunResult r = run_cli("certify --nu 1 --r1 0.5 --gamma 10");
  CHECK(r.exit_code == 0);
  CHECK(string_of(r.out, "ftql_attained_not_surpassed") == "true");
}

TEST_CASE("sweep: deterministic bytes, comment header, expected columns") {
  const fs::path out1 = temp_file("sweep1.csv");
  const fs::path out2 = temp_file("sweep2.csv");
  const std::string spec =
      "sweep --vary gamma --start 1 --stop 100 --points 7 --scale log "
      "--nu 10 --r1-db 10 --phi-tilde 0 --family appendix_d --out ";
  CHECK(run_cli(spec + out1.string()).exit_code == 0);
  CHECK(run_cli(spec + out2.string()).exit_code == 0);
  const std::string text = slurp(out1);
  CHECK(text == slurp(out2));
  CHECK(text.rfind("# gqfi", 0) == 0);
  CHECK(text.find("db_convention") != std::string::npos);
  CHECK(text.find("varied,value,i_f_opt,ftql,advantage,relative_advantage,regime") !=
        std::string::npos);
  CHECK(text.find("gamma,1,") != std::string::npos);
  fs::remove(out1);
  fs::remove(out2);
}

TEST_CASE("sweep: unwritable output path exits with code 2") {
  CHECK(run_cli("sweep --vary gamma --start 1 --stop 2 --points 2 "
                "--out /nonexistent-dir/x.csv")
            .exit_code == 2);
}

TEST_CASE("sweep: bad ranges exit with code 2") {
  CHECK(run_cli("sweep --vary gamma --start 2 --stop 1 --points 2 --out /tmp/x.csv")
            .exit_code == 2);
  CHECK(run_cli("sweep --vary gamma --start 0 --stop 1 --points 2 --scale log "
                "--out /tmp/x.csv")
            .exit_code == 2);
}

TEST_CASE("oracle: desk-scale state agrees with the closed forms") {
  const RunResult r = run_cli("oracle --nu 1.5 --gamma 0.8 --r1 0.3 --phi1 0.7");
  CHECK(r.exit_code == 0);
  CHECK(string_of(r.out, "within_tolerance") == "true");
  CHECK(value_of(r.out, "leakage") <= 1e-8);
}

TEST_CASE("oracle: out-of-range state exits with code 3") {
  CHECK(run_cli("oracle --nu 1 --gamma 100").exit_code == 3);
}

TEST_CASE("separability: single symmetric point reports separable") {
  const RunResult r = run_cli("separability --beta-abs 1 --theta 0.5");
  CHECK(r.exit_code == 0);
  CHECK(string_of(r.out, "separable") == "true");
  CHECK(value_of(r.out, "identity_residual_trace") <= 1e-9);
}

TEST_CASE("separability: theta at or above 1 exits with code 2") {
  CHECK(run_cli("separability --beta-abs 1 --theta 1.0").exit_code == 2);
}

TEST_CASE("separability: grid CSV has the contracted columns") {
  const fs::path out = temp_file("sep.csv");
  CHECK(run_cli("separability --grid --out " + out.string()).exit_code == 0);
  const std::string text = slurp(out);
  CHECK(text.find("beta_abs,beta_phase,theta,min_eig,isolated_eig,separable") !=
        std::string::npos);
  CHECK(text.find("false") == std::string::npos);  // everything separable
  fs::remove(out);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "cnls/manifest.hpp"
#include "cnls/run_config.hpp"

using namespace cnls;
namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::path("cli_work");

int run_cli(const std::string& args, const std::string& stdout_file = "") {
  std::string cmd = std::string(CNLS_CLI_PATH) + " " + args;
  if (!stdout_file.empty()) cmd += " > " + stdout_file;
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

void write_file(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path);
  out << text;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::map<std::string, std::string> read_manifest(const fs::path& path) {
  std::ifstream in(path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return kv;
}

const std::string kGroundConfig = R"(
problem.N = 2
problem.p = 2.5
problem.m = 1
problem.A = 1
grid.radial.n = 4096
grid.radial.R = 12
solver.tau = 0.5
solver.eps_res = 1e-8
output.dir = cli_work/ground
)";

}  // namespace

TEST_CASE("config parser round trip and strictness") {
  const RunConfig cfg = RunConfig::parse_string("a.b = 1\n# note\nc.d = 2 3\n");
  CHECK(cfg.get_int("a.b") == 1);
  CHECK(cfg.get_reals("c.d").size() == 2);
  CHECK_THROWS_AS(cfg.get_string("missing"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse_string("a = 1\na = 2\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse_string("nonsense line\n"), ConfigError);
  CHECK_THROWS_AS(cfg.require_known({"a.b"}), ConfigError);
  CHECK_NOTHROW(cfg.require_known({"a.b", "c.d"}));

  const RunConfig ab = RunConfig::parse_string(
      "experiment.ab_set = 1 0; 0 1; 1 -2/N\nproblem.N = 2\n");
  const auto set = ab_set_from_config(ab, 2);
  REQUIRE(set.size() == 3);
  CHECK(set[2].beta == -1.0);
}

TEST_CASE("ground command produces a deterministic profile") {
  fs::remove_all(kWork);
  write_file(kWork / "ground.cfg", kGroundConfig);
  CHECK(run_cli("ground --config cli_work/ground.cfg") == 0);

  const auto manifest = read_manifest(kWork / "ground" / "ground_manifest.txt");
  REQUIRE(manifest.count("level"));
  CHECK(std::stod(manifest.at("level")) > 0.0);
  CHECK(std::stod(manifest.at("residual")) <= 1e-8);
  REQUIRE(manifest.count("profile_hash"));

  // rerunning with the identical config reproduces the file byte for byte
  const std::string first = slurp(kWork / "ground" / "ground_state.txt");
  CHECK(run_cli("ground --config cli_work/ground.cfg") == 0);
  CHECK(slurp(kWork / "ground" / "ground_state.txt") == first);
  CHECK(read_manifest(kWork / "ground" / "ground_manifest.txt").at("profile_hash") ==
        manifest.at("profile_hash"));
}

TEST_CASE("exponent at the mass-critical endpoint fails with exit 1") {
  std::string cfg = kGroundConfig;
  cfg.replace(cfg.find("problem.p = 2.5"), 15, "problem.p = 2.0");
  write_file(kWork / "bad_p.cfg", cfg);
  CHECK(run_cli("ground --config cli_work/bad_p.cfg", "cli_work/bad_p.out") == 1);
  CHECK(slurp(kWork / "bad_p.out").find("error =") != std::string::npos);
}

TEST_CASE("unknown keys exit 3, missing dependencies exit 2") {
  write_file(kWork / "typo.cfg", kGroundConfig + "solver.tao = 0.1\n");
  CHECK(run_cli("ground --config cli_work/typo.cfg", "cli_work/typo.out") == 3);

  write_file(kWork / "classify_missing.cfg", R"(
problem.N = 2
problem.p = 2.5
problem.m = 1
problem.A = 1
ground_state.file = cli_work/није/ground_state.txt
output.dir = cli_work/classify
)");
  CHECK(run_cli("classify --config cli_work/classify_missing.cfg",
                "cli_work/classify.out") == 2);
}

TEST_CASE("classify marks small data A_plus") {
  write_file(kWork / "classify.cfg", R"(
problem.N = 2
problem.p = 2.5
problem.m = 1
problem.A = 1
ground_state.file = cli_work/ground/ground_state.txt
classify.amplitude = 0.1
output.dir = cli_work/classify
)");
  CHECK(run_cli("classify --config cli_work/classify.cfg") == 0);
  const auto manifest = read_manifest(kWork / "classify" / "classify_manifest.txt");
  CHECK(manifest.at("verdict") == "A_plus");

  // the ground state itself lands on the boundary
  write_file(kWork / "classify_self.cfg", R"(
problem.N = 2
problem.p = 2.5
problem.m = 1
problem.A = 1
ground_state.file = cli_work/ground/ground_state.txt
output.dir = cli_work/classify_self
)");
  CHECK(run_cli("classify --config cli_work/classify_self.cfg") == 0);
  CHECK(read_manifest(kWork / "classify_self" / "classify_manifest.txt").at("verdict") ==
        "boundary");
}

TEST_CASE("evolve command writes a trace") {
  write_file(kWork / "evolve.cfg", R"(
problem.N = 2
problem.p = 2.5
problem.m = 1
problem.A = 1
grid.box.n = 64
grid.box.L = 12
evolution.dt = 1e-3
evolution.t_end = 0.05
evolution.stride = 10
evolve.initial = gaussian
evolve.amplitude = 0.2
output.dir = cli_work/evolve
)");
  CHECK(run_cli("evolve --config cli_work/evolve.cfg") == 0);
  const auto manifest = read_manifest(kWork / "evolve" / "evolve_manifest.txt");
  CHECK(manifest.at("verdict") == "completed");
  CHECK(std::stod(manifest.at("mass_drift")) < 1e-10);
  const std::string trace = slurp(kWork / "evolve" / "trace.csv");
  CHECK(trace.find("t,M_1,E,G_1,Q,K_virial,flag") != std::string::npos);
  CHECK(trace.find("# config: problem.N = 2") != std::string::npos);
}

TEST_CASE("check command passes and is deterministic") {
  write_file(kWork / "check.cfg", R"(
problem.N = 2
problem.p = 2.5
problem.m = 3
problem.A = 1 0.5 0.5; 0.5 1.1 0.5; 0.5 0.5 1.2
check.fields = 30
grid.box.n = 96
grid.box.L = 12
grid.radial.n = 4096
seed = 77
)");
  CHECK(run_cli("check --config cli_work/check.cfg", "cli_work/check1.out") == 0);
  CHECK(run_cli("check --config cli_work/check.cfg", "cli_work/check2.out") == 0);
  const std::string out1 = slurp(kWork / "check1.out");
  CHECK(out1 == slurp(kWork / "check2.out"));

  int suites = 0;
  std::istringstream lines(out1);
  std::string line;
  while (std::getline(lines, line))
    if (line.rfind("PASS", 0) == 0 || line.rfind("FAIL", 0) == 0) ++suites;
  CHECK(suites >= 8);
  CHECK(out1.find("FAIL") == std::string::npos);
}

TEST_CASE("sweep-mu reports the vector transition") {
  write_file(kWork / "sweep.cfg", R"(
problem.N = 2
problem.p = 2.5
problem.m = 2
experiment.mus = 0.5 10
grid.radial.n = 2048
grid.radial.R = 12
output.dir = cli_work/sweep
)");
  CHECK(run_cli("sweep-mu --config cli_work/sweep.cfg") == 0);
  const auto manifest = read_manifest(kWork / "sweep" / "sweep_mu_manifest.txt");
  CHECK(manifest.at("mu_0.selected") == "semitrivial");
  CHECK(manifest.at("mu_1.selected") == "vector");
  const std::string table = slurp(kWork / "sweep" / "sweep_mu.csv");
  CHECK(table.find("mu,vector_action") != std::string::npos);
}

TEST_CASE("instability command detects blow-up near the standing wave") {
  write_file(kWork / "instability.cfg", R"(
problem.N = 2
problem.p = 2.5
problem.m = 1
problem.A = 1
ground_state.file = cli_work/ground/ground_state.txt
experiment.lambdas = 1.2
grid.box.n = 128
grid.box.L = 12
evolution.dt = 1e-3
evolution.t_end = 6
evolution.stride = 100
output.dir = cli_work/instability
)");
  CHECK(run_cli("instability --config cli_work/instability.cfg") == 0);
  const auto manifest =
      read_manifest(kWork / "instability" / "instability_manifest.txt");
  CHECK(manifest.at("lambda_0.classification") == "A_minus");
  CHECK(manifest.at("lambda_0.outcome") == "blowup_detected");
  CHECK(fs::exists(kWork / "instability" / "trace_lambda_0.csv"));
}

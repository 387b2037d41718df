#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "shadow/config.hpp"
#include "shadow/simulate.hpp"

using namespace shadow;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code;
  std::string output;
};

const char* cli_binary() {
  const char* bin = std::getenv("SHADOWOSC_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "SHADOWOSC_BIN must point at the CLI");
  return bin;
}

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(cli_binary()) + " " + args + " 2>&1";
  std::array<char, 4096> buf{};
  std::string output;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fgets(buf.data(), buf.size(), pipe)) output += buf.data();
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), output};
}

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("exact prints the reference values with 17 digits") {
  const CliResult r =
      run_cli("exact --eps 0.2 --n 1 --alpha 0.5 --beta 0.5 --gamma 0.5");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("tau_n = 6.3828409010676614") != std::string::npos);
  CHECK(r.output.find("period = 38.92992065149636") != std::string::npos);
  CHECK(r.output.find("valid = 1") != std::string::npos);

  const CliResult r2 =
      run_cli("exact --eps 0.1 --n 2 --alpha 0.5 --beta 0.5 --gamma 0.5");
  CHECK(r2.exit_code == 0);
  CHECK(r2.output.find("tau_n = 6.38284090106766") != std::string::npos);
}

TEST_CASE("exact signals an unsolvable modulus equation") {
  const CliResult r =
      run_cli("exact --eps 0.4 --n 1 --alpha 0.5 --beta 0.5 --gamma 0.5");
  CHECK(r.exit_code == 2);
}

TEST_CASE("exact reports a violated hypothesis but still prints") {
  const CliResult r =
      run_cli("exact --eps 0.2 --n 1 --alpha 0.1 --beta 0.1 --gamma 0.5");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("chi_n = ") != std::string::npos);
  CHECK(r.output.find("valid = 0") != std::string::npos);
}

TEST_CASE("unknown preset exits with the usage code") {
  const CliResult r = run_cli("reproduce nosuch");
  CHECK(r.exit_code == 64);
}

TEST_CASE("config round-trip reproduces identical runs") {
  const fs::path dir = temp_dir("shadowosc_cli_roundtrip");
  ExperimentConfig cfg;
  cfg.params = {0.2, 6.0, 0.5, 0.5, 0.5};
  cfg.t_end = 20.0;
  cfg.track_layers = 1;
  const fs::path cfg_path = dir / "run.cfg";
  cfg.write(cfg_path.string());

  const ExperimentConfig back = ExperimentConfig::read(cfg_path.string());
  CHECK(back.params.eps == cfg.params.eps);
  CHECK(back.t_end == cfg.t_end);
  CHECK(back.initial.bump_height == cfg.initial.bump_height);

  const fs::path out1 = dir / "out1";
  const fs::path out2 = dir / "out2";
  const CliResult r1 = run_cli("simulate --config " + cfg_path.string() +
                               " --out " + out1.string());
  REQUIRE(r1.exit_code == 0);
  const CliResult r2 = run_cli("simulate --config " + cfg_path.string() +
                               " --out " + out2.string());
  REQUIRE(r2.exit_code == 0);
  CHECK(slurp(out1 / "trajectory.csv") == slurp(out2 / "trajectory.csv"));

  // The config the run rewrites parses back to the same run.
  const ExperimentConfig echoed =
      ExperimentConfig::read((out1 / "config.txt").string());
  CHECK(echoed.params.tau == cfg.params.tau);
  CHECK(echoed.initial.bump_center == cfg.initial.bump_center);
  fs::remove_all(dir);
}

TEST_CASE("simulate rejects a broken config with one aggregated report") {
  const fs::path dir = temp_dir("shadowosc_cli_badcfg");
  const fs::path cfg_path = dir / "bad.cfg";
  {
    std::ofstream out(cfg_path);
    out << "eps = -0.2\n"
        << "tau = 6.0\n"
        << "dt = 0.5\n"
        << "t_end = 0\n";
  }
  const CliResult r = run_cli("simulate --config " + cfg_path.string() +
                              " --out " + (dir / "out").string());
  CHECK(r.exit_code == 64);
  CHECK(r.output.find("eps") != std::string::npos);
  CHECK(r.output.find("dt") != std::string::npos);
  CHECK(r.output.find("t_end") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("analyze a synthetic sine trajectory") {
  const fs::path dir = temp_dir("shadowosc_cli_analyze");
  const fs::path traj = dir / "trajectory.csv";
  {
    std::ofstream out(traj);
    out << "t,mean_u,xi\n";
    for (double t = 0.0; t <= 200.0; t += 0.01)
      out << t << ',' << std::sin(2.0 * 3.14159265358979 * t / 38.93) << ",0\n";
  }
  const CliResult r =
      run_cli("analyze --trajectory " + traj.string() + " --exact-period " +
              "38.93 --out " + dir.string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("first_relative_error_pct = ") != std::string::npos);
  // 0 +- 0.1 percent.
  const auto pos = r.output.find("first_relative_error_pct = ");
  const double err = std::stod(r.output.substr(pos + 27));
  CHECK(std::abs(err) < 0.1);
  CHECK(fs::exists(dir / "periods.csv"));

  // A constant trajectory has too few cycles: runtime failure.
  const fs::path flat = dir / "flat.csv";
  {
    std::ofstream out(flat);
    out << "t,mean_u,xi\n";
    for (double t = 0.0; t <= 100.0; t += 0.1) out << t << ",0.5,0\n";
  }
  const CliResult rflat = run_cli("analyze --trajectory " + flat.string() +
                                  " --exact-period 38.93 --out " +
                                  dir.string());
  CHECK(rflat.exit_code == 1);
  fs::remove_all(dir);
}

TEST_CASE("reproduce sweep emits the asymptotics table") {
  const fs::path dir = temp_dir("shadowosc_cli_sweep");
  const CliResult r = run_cli("reproduce sweep --out " + dir.string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("[PASS]") != std::string::npos);
  CHECK(r.output.find("[FAIL]") == std::string::npos);
  CHECK(fs::exists(dir / "sweep.csv"));
  CHECK(fs::exists(dir / "checks.txt"));
  fs::remove_all(dir);
}

TEST_SUITE_END();

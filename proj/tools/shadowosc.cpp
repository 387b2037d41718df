// Command-line front end: exact Hopf data, simulation runs, trajectory
// analysis and one-command reproduction of the reference experiments.

#include <CLI11.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "shadow/analyze.hpp"
#include "shadow/config.hpp"
#include "shadow/presets.hpp"
#include "shadow/spectrum.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitHypothesis = 2;
constexpr int kExitUsage = 64;

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string out_root() {
  const char* env = std::getenv("SHADOWOSC_OUT_ROOT");
  return env ? env : ".";
}

struct ExactReport {
  std::vector<std::pair<std::string, std::string>> rows;
  bool valid = true;
};

ExactReport exact_report(double eps, int n, double alpha, double beta,
                         double gamma) {
  shadow::Params params{eps, 1.0, alpha, beta, gamma};
  ExactReport rep;
  auto put = [&rep](const std::string& key, const std::string& value) {
    rep.rows.emplace_back(key, value);
  };
  put("eps", fmt17(eps));
  put("n", std::to_string(n));
  put("alpha", fmt17(alpha));
  put("beta", fmt17(beta));
  put("gamma", fmt17(gamma));
  put("delta", fmt17(params.delta()));

  const shadow::StationaryProfile profile =
      shadow::StationaryProfile::build(eps, n, -1);
  put("k_n", fmt17(profile.modulus().k()));
  put("m1", fmt17(profile.modulus().m1()));
  put("rho", fmt17(profile.rho()));
  put("mass2", fmt17(profile.mass2()));

  const shadow::HopfData hopf = shadow::hopf_point(params, n);
  rep.valid = hopf.valid;
  put("chi_n", fmt17(hopf.chi_n));
  put("valid", hopf.valid ? "1" : "0");
  put("tau_n", fmt17(hopf.tau_n));
  put("lambda_In", fmt17(hopf.lambda_In));
  put("period", fmt17(hopf.period));
  put("discriminant", fmt17(hopf.discriminant));

  const shadow::HopfAsymptotics asym =
      shadow::hopf_asymptotics(n, eps, params);
  put("period_asym", fmt17(asym.period));
  put("tau_asym", fmt17(asym.tau));
  put("chi_asym", fmt17(asym.chi));

  const auto [mu0, mun] = shadow::mu_extremes(profile);
  put("mu0", fmt17(mu0));
  put("mun", fmt17(mun));

  const double nan = std::nan("");
  double dre = nan, dim = nan, margin = nan;
  if (hopf.valid) {
    const shadow::TransversalityData tv = shadow::transversality(params, n);
    dre = tv.dRe_dtau;
    dim = tv.dIm_dtau;
    margin = shadow::simplicity_margin(params, n);
  }
  put("dRe_dtau", fmt17(dre));
  put("dIm_dtau", fmt17(dim));
  put("simplicity_margin", fmt17(margin));
  return rep;
}

int cmd_exact(double eps, int n, double alpha, double beta, double gamma,
              const std::string& csv_path) {
  ExactReport rep;
  try {
    rep = exact_report(eps, n, alpha, beta, gamma);
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitHypothesis;
  }
  for (const auto& [key, value] : rep.rows)
    std::cout << key << " = " << value << "\n";
  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    for (std::size_t i = 0; i < rep.rows.size(); ++i)
      csv << rep.rows[i].first << (i + 1 < rep.rows.size() ? "," : "\n");
    for (std::size_t i = 0; i < rep.rows.size(); ++i)
      csv << rep.rows[i].second << (i + 1 < rep.rows.size() ? "," : "\n");
  }
  if (!rep.valid) {
    std::cerr << "hypothesis chi_n < delta violated\n";
    return kExitHypothesis;
  }
  return kExitOk;
}

int cmd_simulate(const std::string& config_path, std::string out_dir) {
  shadow::ExperimentConfig cfg;
  try {
    cfg = shadow::ExperimentConfig::read(config_path);
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }
  if (out_dir.empty()) out_dir = out_root();
  std::filesystem::create_directories(out_dir);

  const shadow::Grid grid = shadow::Grid::uniform(cfg.nodes);
  shadow::RunOptions opts;
  opts.dt = cfg.dt;
  opts.t_end = cfg.t_end;
  opts.record_stride = cfg.record_stride;
  opts.snapshot_stride = cfg.snapshot_stride;
  opts.track_layers = cfg.track_layers;

  try {
    const shadow::State init =
        shadow::make_initial(cfg.initial, cfg.params.eps, cfg.n, grid);
    const shadow::Trajectory traj = shadow::run(init, cfg.params, grid, opts);
    shadow::write_trajectory_csv(traj, out_dir + "/trajectory.csv");
    if (cfg.snapshot_stride > 0)
      shadow::write_snapshots_csv(traj, grid, out_dir + "/snapshots.csv");
    cfg.write(out_dir + "/config.txt");
    std::ofstream summary(out_dir + "/summary.txt");
    summary << "records = " << traj.times.size() << "\n"
            << "t_end = " << fmt17(traj.final_state.t) << "\n"
            << "final_mean_u = "
            << fmt17(shadow::trapezoid(traj.final_state.u, grid.dx)) << "\n"
            << "final_xi = " << fmt17(traj.final_state.xi) << "\n";
    std::cout << "wrote " << out_dir << "/trajectory.csv ("
              << traj.times.size() << " records)\n";
  } catch (const shadow::BlowUpError& e) {
    std::cerr << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_analyze(const std::string& traj_path, double exact_period,
                bool have_exact, double eps, int n, double alpha, double beta,
                double gamma, double skip, std::pair<double, double> window,
                std::string out_dir) {
  if (!have_exact) {
    shadow::Params params{eps, 1.0, alpha, beta, gamma};
    const shadow::HopfData hopf = shadow::hopf_point(params, n);
    if (!hopf.valid) {
      std::cerr << "hypothesis chi_n < delta violated; pass --exact-period\n";
      return kExitHypothesis;
    }
    exact_period = hopf.period;
  }
  if (out_dir.empty()) out_dir = out_root();
  std::filesystem::create_directories(out_dir);
  try {
    const shadow::TrajectoryData data = shadow::read_trajectory_csv(traj_path);
    const shadow::AnalysisSummary s = shadow::analyze_trajectory(
        data, exact_period, skip, window.first, window.second);
    shadow::write_analysis_csv(s, out_dir + "/periods.csv");
    shadow::write_analysis_summary(s, out_dir + "/analysis_summary.txt");
    std::cout << "first_period = " << fmt17(s.estimate.first_period) << "\n"
              << "exact_period = " << fmt17(s.exact_period) << "\n"
              << "first_relative_error_pct = "
              << fmt17(s.relative_error_pct.front()) << "\n"
              << "cycles = " << s.estimate.periods.size() << "\n";
    if (s.has_antiphase)
      std::cout << "antiphase_score = " << fmt17(s.antiphase) << "\n"
                << "antiphase = " << (s.antiphase_verdict ? "yes" : "no")
                << "\n";
  } catch (const shadow::TooFewCyclesError& e) {
    std::cerr << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::runtime_error& e) {
    std::cerr << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_reproduce(const std::string& preset, std::string out_dir) {
  if (!shadow::is_preset(preset)) {
    std::cerr << "unknown preset: " << preset << " (expected a1|b1|c1|d1|fig4|fig5|sweep)\n";
    return kExitUsage;
  }
  if (out_dir.empty()) out_dir = out_root() + "/" + preset;
  try {
    const shadow::PresetResult result = shadow::run_preset(preset, out_dir);
    for (const auto& c : result.checks)
      std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << result.preset << ": "
                << c.name << " (" << c.detail << ")\n";
    std::cout << "artifacts in " << out_dir << "\n";
    return result.all_pass() ? kExitOk : kExitRuntime;
  } catch (const shadow::BlowUpError& e) {
    std::cerr << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact Hopf data and layer-oscillation experiments for the "
               "shadow reaction-diffusion system"};
  app.require_subcommand(1);

  double eps = 0.2, alpha = 0.5, beta = 0.5, gamma = 0.5;
  int n = 1;
  std::string csv_path, config_path, traj_path, out_dir, preset;
  double exact_period = 0.0, skip = 0.0;
  std::pair<double, double> window{0.0, 200.0};

  auto* exact = app.add_subcommand("exact", "print exact bifurcation data");
  exact->add_option("--eps", eps, "interface width parameter")->required();
  exact->add_option("--n", n, "layer count")->required();
  exact->add_option("--alpha", alpha, "coupling constant alpha");
  exact->add_option("--beta", beta, "coupling constant beta");
  exact->add_option("--gamma", gamma, "coupling constant gamma");
  exact->add_option("--csv", csv_path, "also write the report as CSV");

  auto* simulate = app.add_subcommand("simulate", "run a configured experiment");
  simulate->add_option("--config", config_path, "key = value config file")
      ->required();
  simulate->add_option("--out", out_dir, "output directory");

  auto* analyze = app.add_subcommand("analyze", "extract periods and scores");
  analyze->add_option("--trajectory", traj_path, "trajectory CSV")->required();
  auto* period_opt =
      analyze->add_option("--exact-period", exact_period, "reference period");
  analyze->add_option("--eps", eps, "eps (to compute the exact period)");
  analyze->add_option("--n", n, "layer count");
  analyze->add_option("--alpha", alpha, "alpha");
  analyze->add_option("--beta", beta, "beta");
  analyze->add_option("--gamma", gamma, "gamma");
  analyze->add_option("--skip", skip, "initial transient to discard");
  analyze->add_option("--window", window, "anti-phase window begin end");
  analyze->add_option("--out", out_dir, "output directory");

  auto* reproduce =
      app.add_subcommand("reproduce", "rerun a reference experiment preset");
  reproduce->add_option("preset", preset, "a1|b1|c1|d1|fig4|fig5|sweep")
      ->required();
  reproduce->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (exact->parsed()) return cmd_exact(eps, n, alpha, beta, gamma, csv_path);
    if (simulate->parsed()) return cmd_simulate(config_path, out_dir);
    if (analyze->parsed())
      return cmd_analyze(traj_path, exact_period, period_opt->count() > 0, eps,
                         n, alpha, beta, gamma, skip, window, out_dir);
    if (reproduce->parsed()) return cmd_reproduce(preset, out_dir);
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << e.what() << "\n";
    return kExitHypothesis;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

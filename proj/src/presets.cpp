#include "shadow/presets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "shadow/analyze.hpp"
#include "shadow/spectrum.hpp"

namespace shadow {

namespace {

std::string fmt(double v, int digits = 17) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

ExperimentConfig single_layer_config(double tau, double t_end) {
  ExperimentConfig cfg;
  cfg.params = {0.2, tau, 0.5, 0.5, 0.5};
  cfg.n = 1;
  cfg.nodes = 201;
  cfg.dt = 0.01;
  cfg.t_end = t_end;
  cfg.initial.kind = InitialKind::kPerturbedSingleLayer;
  cfg.initial.xi0 = 0.03;
  cfg.record_stride = 1;
  cfg.track_layers = 1;
  return cfg;
}

ExperimentConfig two_layer_config(double tau) {
  ExperimentConfig cfg;
  cfg.params = {0.1, tau, 0.5, 0.5, 0.5};
  cfg.n = 2;
  cfg.nodes = 201;
  cfg.dt = 0.01;
  cfg.t_end = 2600.0;
  cfg.initial.kind = InitialKind::kNearTwoLayer;
  cfg.initial.bump_height = 0.0;
  cfg.initial.xi0 = 0.03;
  cfg.record_stride = 1;
  cfg.track_layers = 2;
  return cfg;
}

// Half peak-to-peak of the series over [t0 - 20, t0 + 20].
double oscillation_amplitude(const std::vector<double>& t,
                             const std::vector<double>& v, double t0) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t0 - 20.0 || t[i] > t0 + 20.0) continue;
    lo = std::min(lo, v[i]);
    hi = std::max(hi, v[i]);
  }
  return 0.5 * (hi - lo);
}

double mean_of_range(const std::vector<double>& v, std::size_t a,
                     std::size_t b) {
  double s = 0.0;
  for (std::size_t i = a; i < b; ++i) s += v[i];
  return s / static_cast<double>(b - a);
}

PresetCheck check_in(const std::string& name, double value, double lo,
                     double hi) {
  std::ostringstream detail;
  detail << name << " = " << fmt(value, 6) << ", band [" << fmt(lo, 6) << ", "
         << fmt(hi, 6) << "]";
  return {name, value >= lo && value <= hi, detail.str()};
}

void append_period_checks(PresetResult& result, const AnalysisSummary& a) {
  result.checks.push_back(
      check_in("first_period", a.estimate.first_period, 37.0, 39.0));
  result.checks.push_back(check_in("first_relative_error_pct",
                                   a.relative_error_pct.front(), 1.1, 3.1));
  result.checks.push_back(check_in("final_relative_error_pct",
                                   a.relative_error_pct.back(), 1.9, 3.9));
  const std::size_t m = a.relative_error_pct.size();
  const double head = mean_of_range(a.relative_error_pct, 0, m / 3);
  const double tail = mean_of_range(a.relative_error_pct, m - m / 3, m);
  std::ostringstream detail;
  detail << "mean of first third " << fmt(head, 6) << " -> mean of last third "
         << fmt(tail, 6);
  result.checks.push_back({"relative_error_increasing", tail > head,
                           detail.str()});
}

struct PresetArtifacts {
  ExperimentConfig cfg;
  Trajectory traj;
  AnalysisSummary analysis;
  bool analysis_ok = false;
};

PresetArtifacts run_and_write(const ExperimentConfig& cfg,
                              const std::string& out_dir, double exact_period,
                              double skip) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  cfg.validate();
  cfg.write(out_dir + "/config.txt");

  const Grid grid = Grid::uniform(cfg.nodes);
  const State init = make_initial(cfg.initial, cfg.params.eps, cfg.n, grid);
  RunOptions opts;
  opts.dt = cfg.dt;
  opts.t_end = cfg.t_end;
  opts.record_stride = cfg.record_stride;
  opts.snapshot_stride = cfg.snapshot_stride;
  opts.track_layers = cfg.track_layers;

  PresetArtifacts art;
  art.cfg = cfg;
  art.traj = run(init, cfg.params, grid, opts);
  write_trajectory_csv(art.traj, out_dir + "/trajectory.csv");
  if (cfg.snapshot_stride > 0)
    write_snapshots_csv(art.traj, grid, out_dir + "/snapshots.csv");

  {
    std::ofstream fin(out_dir + "/final_u.csv");
    fin << "x,u\n";
    for (int i = 0; i < grid.nodes; ++i)
      fin << fmt(grid.x(i)) << ',' << fmt(art.traj.final_state.u[i]) << "\n";
  }

  TrajectoryData data;
  data.times = art.traj.times;
  data.mean_u = art.traj.mean_u;
  data.xi = art.traj.xi;
  data.layers = art.traj.layers;
  try {
    art.analysis = analyze_trajectory(data, exact_period, skip, 0.0, 200.0);
    art.analysis_ok = true;
    write_analysis_csv(art.analysis, out_dir + "/periods.csv");
    write_analysis_summary(art.analysis, out_dir + "/analysis_summary.txt");
  } catch (const TooFewCyclesError&) {
    art.analysis_ok = false;
  }
  return art;
}

void write_checks(const PresetResult& result, const std::string& out_dir) {
  std::ofstream out(out_dir + "/checks.txt");
  for (const auto& c : result.checks)
    out << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail
        << "\n";
}

PresetResult run_sweep(const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const std::vector<double> eps_grid = {0.1, 0.08, 0.06, 0.05, 0.04};
  Params params{0.1, 1.0, 0.5, 0.5, 0.5};

  std::vector<double> period_ratio, tau_ratio, chi_ratio;
  std::ofstream csv(out_dir + "/sweep.csv");
  csv << "eps,period,period_asym,period_ratio,tau,tau_asym,tau_ratio,"
         "chi,chi_asym,chi_ratio\n";
  for (double eps : eps_grid) {
    params.eps = eps;
    const HopfData h = hopf_point(params, 1);
    const HopfAsymptotics a = hopf_asymptotics(1, eps, params);
    period_ratio.push_back(h.period / a.period);
    tau_ratio.push_back(h.tau_n / a.tau);
    chi_ratio.push_back(h.chi_n / a.chi);
    csv << fmt(eps) << ',' << fmt(h.period) << ',' << fmt(a.period) << ','
        << fmt(period_ratio.back()) << ',' << fmt(h.tau_n) << ',' << fmt(a.tau)
        << ',' << fmt(tau_ratio.back()) << ',' << fmt(h.chi_n) << ','
        << fmt(a.chi) << ',' << fmt(chi_ratio.back()) << "\n";
  }

  PresetResult result;
  result.preset = "sweep";
  auto check_family = [&](const std::string& name,
                          const std::vector<double>& ratio) {
    const std::size_t m = ratio.size();
    bool monotone = true;
    for (std::size_t i = m - 3; i + 1 < m; ++i)
      monotone = monotone && std::abs(ratio[i + 1] - 1.0) <=
                                 std::abs(ratio[i] - 1.0) + 1e-12;
    std::ostringstream detail;
    detail << name << " ratios:";
    for (double r : ratio) detail << ' ' << fmt(r, 9);
    result.checks.push_back(
        {name + "_monotone_last3", monotone, detail.str()});
    result.checks.push_back(check_in(name + "_ratio_at_0.04", ratio.back(),
                                     0.95, 1.05));
  };
  check_family("period", period_ratio);
  check_family("tau", tau_ratio);
  check_family("chi", chi_ratio);
  write_checks(result, out_dir);
  return result;
}

}  // namespace

bool PresetResult::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const PresetCheck& c) { return c.pass; });
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"a1",   "b1",   "c1",  "d1",
                                                 "fig4", "fig5", "sweep"};
  return names;
}

bool is_preset(const std::string& name) {
  const auto& names = preset_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

ExperimentConfig preset_config(const std::string& name) {
  if (name == "a1" || name == "fig5") return single_layer_config(6.0, 2600.0);
  if (name == "fig4") return single_layer_config(6.0, 100.0);
  if (name == "b1") return single_layer_config(6.7, 600.0);
  if (name == "c1") return two_layer_config(6.0);
  if (name == "d1") return two_layer_config(6.7);
  throw std::invalid_argument("preset `" + name + "` has no single config");
}

PresetResult run_preset(const std::string& name, const std::string& out_dir) {
  if (!is_preset(name))
    throw std::invalid_argument("unknown preset: " + name);
  if (name == "sweep") return run_sweep(out_dir);

  const ExperimentConfig cfg = preset_config(name);
  const HopfData hopf = hopf_point(cfg.params, cfg.n);

  PresetResult result;
  result.preset = name;
  const PresetArtifacts art = run_and_write(cfg, out_dir, hopf.period, 0.0);

  if (name == "a1" || name == "fig5") {
    if (!art.analysis_ok) {
      result.checks.push_back({"period_extraction", false, "too few cycles"});
    } else {
      append_period_checks(result, art.analysis);
    }
    // Convergence back to the single-layer state.
    const Grid grid = Grid::uniform(cfg.nodes);
    const StationaryProfile u1 =
        StationaryProfile::build(cfg.params.eps, 1, -1);
    double dev = 0.0;
    for (int i = 0; i < grid.nodes; ++i)
      dev = std::max(dev,
                     std::abs(art.traj.final_state.u[i] - u1(grid.x(i))));
    std::ostringstream detail;
    detail << "max |u(t_end) - u_1^-| = " << fmt(dev, 6);
    result.checks.push_back({"converges_to_u1", dev < 0.05, detail.str()});
  } else if (name == "fig4") {
    if (!art.analysis_ok)
      result.checks.push_back({"period_extraction", false, "too few cycles"});
    else
      result.checks.push_back(check_in(
          "first_period", art.analysis.estimate.first_period, 37.0, 39.0));
  } else if (name == "b1") {
    const double a50 = oscillation_amplitude(art.traj.times, art.traj.mean_u, 50.0);
    const double a300 =
        oscillation_amplitude(art.traj.times, art.traj.mean_u, 300.0);
    std::ostringstream detail;
    detail << "amplitude(t=50) = " << fmt(a50, 6) << ", amplitude(t=300) = "
           << fmt(a300, 6);
    result.checks.push_back({"amplitude_growing", a300 > a50, detail.str()});
  } else if (name == "c1" || name == "d1") {
    if (!art.analysis_ok || !art.analysis.has_antiphase) {
      result.checks.push_back(
          {"antiphase", false, "layer series unavailable over [0,200]"});
    } else {
      std::ostringstream detail;
      detail << "score over [0,200] = " << fmt(art.analysis.antiphase, 6);
      result.checks.push_back(
          {"antiphase", art.analysis.antiphase < kAntiphaseThreshold,
           detail.str()});
    }
    if (name == "d1") {
      const auto& u = art.traj.final_state.u;
      const auto [lo, hi] = std::minmax_element(u.begin(), u.end());
      const double spread = *hi - *lo;
      double mean = 0.0;
      for (double v : u) mean += v;
      mean /= static_cast<double>(u.size());
      const double target = 1.0 / std::numbers::sqrt2;
      std::ostringstream detail;
      detail << "spread = " << fmt(spread, 6) << ", mean = " << fmt(mean, 6)
             << ", target " << fmt(target, 6);
      result.checks.push_back({"final_constant_at_inv_sqrt2",
                               spread < 1e-2 && std::abs(mean - target) < 1e-2,
                               detail.str()});
    }
  }
  write_checks(result, out_dir);
  return result;
}

}  // namespace shadow

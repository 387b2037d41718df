#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "shadow/analyze.hpp"
#include "shadow/config.hpp"
#include "shadow/presets.hpp"
#include "shadow/simulate.hpp"

using namespace shadow;

namespace {

const Params kA1{0.2, 6.0, 0.5, 0.5, 0.5};

State sampled_profile(const StationaryProfile& p, const Grid& grid,
                      double xi0) {
  State s;
  s.t = 0.0;
  s.xi = xi0;
  s.u.resize(grid.nodes);
  for (int i = 0; i < grid.nodes; ++i) s.u[i] = p(grid.x(i));
  return s;
}

}  // namespace

TEST_SUITE_BEGIN("simulate");

TEST_CASE("grid construction") {
  const Grid g = Grid::uniform(201);
  CHECK(g.dx == doctest::Approx(0.005).epsilon(1e-16));
  CHECK(g.x(200) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(Grid::uniform(2), std::invalid_argument);
}

TEST_CASE("constant steady state is a fixed point of the step") {
  const Grid grid = Grid::uniform(201);
  const double delta = kA1.delta();
  const double ustar = std::sqrt(1.0 - delta);
  State s;
  s.t = 0.0;
  s.u.assign(grid.nodes, ustar);
  s.xi = kA1.beta * ustar / kA1.gamma;
  const State next = step(s, kA1, grid, 0.01);
  for (double v : next.u) CHECK(std::abs(v - ustar) < 1e-13);
  CHECK(std::abs(next.xi - s.xi) < 1e-13);
}

TEST_CASE("zero data stays zero") {
  const Grid grid = Grid::uniform(101);
  State s;
  s.t = 0.0;
  s.u.assign(grid.nodes, 0.0);
  s.xi = 0.0;
  State cur = s;
  for (int i = 0; i < 100; ++i) cur = step(cur, kA1, grid, 0.05);
  for (double v : cur.u) CHECK(v == 0.0);
  CHECK(cur.xi == 0.0);
}

TEST_CASE("exact stationary data barely drifts") {
  const Grid grid = Grid::uniform(201);
  const StationaryProfile p = StationaryProfile::build(0.2, 1, -1);
  const State init = sampled_profile(p, grid, 0.0);
  RunOptions opts;
  opts.dt = 0.01;
  opts.t_end = 10.0;
  const Trajectory traj = run(init, kA1, grid, opts);
  const double m0 = traj.mean_u.front();
  for (double m : traj.mean_u) CHECK(std::abs(m - m0) < 1e-3);
}

TEST_CASE("frozen-xi limit at huge tau") {
  const Grid grid = Grid::uniform(101);
  Params params = kA1;
  params.tau = 1e9;
  InitialSpec spec;
  spec.kind = InitialKind::kPerturbedSingleLayer;
  const State init = make_initial(spec, 0.2, 1, grid);
  RunOptions opts;
  opts.dt = 0.01;
  opts.t_end = 10.0;
  const Trajectory traj = run(init, params, grid, opts);
  for (double xi : traj.xi) CHECK(std::abs(xi - spec.xi0) < 1e-6);
}

TEST_CASE("two runs are bit-identical") {
  const Grid grid = Grid::uniform(201);
  InitialSpec spec;
  const State init = make_initial(spec, 0.2, 1, grid);
  RunOptions opts;
  opts.dt = 0.01;
  opts.t_end = 25.0;
  opts.track_layers = 1;
  const Trajectory a = run(init, kA1, grid, opts);
  const Trajectory b = run(init, kA1, grid, opts);
  REQUIRE(a.times.size() == b.times.size());
  for (std::size_t i = 0; i < a.times.size(); ++i) {
    CHECK(a.mean_u[i] == b.mean_u[i]);
    CHECK(a.xi[i] == b.xi[i]);
  }
  for (std::size_t i = 0; i < a.final_state.u.size(); ++i)
    CHECK(a.final_state.u[i] == b.final_state.u[i]);
}

TEST_CASE("blow-up is detected and reported") {
  const Grid grid = Grid::uniform(11);
  State s;
  s.t = 3.5;
  s.u.assign(grid.nodes, 1e200);
  s.xi = 0.0;
  try {
    step(s, kA1, grid, 0.01);
    FAIL("expected BlowUpError");
  } catch (const BlowUpError& e) {
    CHECK(e.t_last == doctest::Approx(3.5));
  }
}

TEST_CASE("initial data kinds") {
  const Grid grid = Grid::uniform(201);
  const StationaryProfile u1 = StationaryProfile::build(0.2, 1, -1);

  InitialSpec custom;
  custom.kind = InitialKind::kCustomSamples;
  custom.xi0 = 0.0;
  custom.samples.resize(grid.nodes);
  for (int i = 0; i < grid.nodes; ++i) custom.samples[i] = u1(grid.x(i));
  const State reproduced = make_initial(custom, 0.2, 1, grid);
  for (int i = 0; i < grid.nodes; ++i)
    CHECK(reproduced.u[i] == custom.samples[i]);
  CHECK(reproduced.xi == 0.0);

  InitialSpec bumped;  // defaults: positive bump on u_1^-
  const State a1 = make_initial(bumped, 0.2, 1, grid);
  CHECK(trapezoid(a1.u, grid.dx) >
        trapezoid(reproduced.u, grid.dx));
  CHECK(a1.xi == doctest::Approx(0.03));

  InitialSpec two;
  two.kind = InitialKind::kNearTwoLayer;
  two.bump_height = 0.0;
  const State c1 = make_initial(two, 0.1, 2, grid);
  int sign_changes = 0;
  for (int i = 0; i + 1 < grid.nodes; ++i)
    if (c1.u[i] * c1.u[i + 1] < 0.0) ++sign_changes;
  CHECK(sign_changes == 2);

  CHECK_THROWS_AS(make_initial(two, 0.1, 1, grid), std::invalid_argument);
  InitialSpec short_samples;
  short_samples.kind = InitialKind::kCustomSamples;
  short_samples.samples = {1.0, 2.0};
  CHECK_THROWS_AS(make_initial(short_samples, 0.2, 1, grid),
                  std::invalid_argument);
}

TEST_CASE("run option validation") {
  const Grid grid = Grid::uniform(51);
  InitialSpec spec;
  const State init = make_initial(spec, 0.2, 1, grid);
  RunOptions opts;
  opts.t_end = 0.0;
  CHECK_THROWS_AS(run(init, kA1, grid, opts), std::invalid_argument);
  opts.t_end = 1.0;
  opts.dt = 0.2;
  CHECK_THROWS_AS(run(init, kA1, grid, opts), std::invalid_argument);
  opts.dt = 0.01;
  opts.record_stride = 0;
  CHECK_THROWS_AS(run(init, kA1, grid, opts), std::invalid_argument);
}

TEST_CASE("trajectory csv round-trips, empty fields marking annihilation") {
  Trajectory traj;
  traj.times = {0.0, 0.5, 1.0};
  traj.mean_u = {0.01, 0.02, 0.03};
  traj.xi = {0.3, 0.31, 0.32};
  traj.layers = {{0.25, 0.26, 0.27},
                 {0.75, std::nan(""), std::nan("")}};
  const std::string path =
      (std::filesystem::temp_directory_path() / "traj_rt.csv").string();
  write_trajectory_csv(traj, path);
  const TrajectoryData data = read_trajectory_csv(path);
  REQUIRE(data.times.size() == 3);
  REQUIRE(data.layers.size() == 2);
  CHECK(data.times[2] == 1.0);
  CHECK(data.mean_u[1] == 0.02);
  CHECK(data.layers[0][2] == 0.27);
  CHECK(std::isnan(data.layers[1][1]));
  CHECK(std::isnan(data.layers[1][2]));
  std::filesystem::remove(path);
}

TEST_CASE("short single-layer run already shows the slow oscillation") {
  const ExperimentConfig cfg = preset_config("a1");
  const Grid grid = Grid::uniform(cfg.nodes);
  const State init = make_initial(cfg.initial, cfg.params.eps, cfg.n, grid);
  RunOptions opts;
  opts.dt = cfg.dt;
  opts.t_end = 150.0;
  const Trajectory traj = run(init, cfg.params, grid, opts);
  const PeriodEstimate est = extract_periods(traj.times, traj.mean_u);
  CHECK(est.first_period > 37.0);
  CHECK(est.first_period < 39.0);
}

TEST_SUITE_END();

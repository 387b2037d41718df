// Time integration of the shadow system on [0,1] with Neumann boundaries:
// backward-Euler diffusion, explicit reaction and explicit scalar coupling.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shadow/stationary.hpp"

namespace shadow {

struct Grid {
  int nodes;  // includes both endpoints, >= 3
  double dx;  // 1 / (nodes - 1)

  static Grid uniform(int nodes);
  double x(int i) const { return i * dx; }
};

struct State {
  std::vector<double> u;
  double xi;
  double t;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<double> mean_u;  // trapezoid of u over [0,1]
  std::vector<double> xi;
  // layers[j][i]: position of tracked layer j at record i; NaN once the
  // layer has annihilated.
  std::vector<std::vector<double>> layers;
  std::vector<double> snapshot_times;
  std::vector<std::vector<double>> snapshots;
  State final_state;
};

struct BlowUpError : std::runtime_error {
  explicit BlowUpError(double t_last_finite)
      : std::runtime_error("simulation blew up; last finite t = " +
                           std::to_string(t_last_finite)),
        t_last(t_last_finite) {}
  double t_last;
};

// Trapezoid rule over the grid values.
double trapezoid(std::span<const double> u, double dx);

// One semi-implicit step: (I - dt eps^2 D2) u* = u + dt (f(u) - alpha xi),
// then xi* = xi + (dt/tau)(beta <u> - gamma xi) with the pre-step u.
State step(const State& s, const Params& params, const Grid& grid, double dt);

enum class InitialKind {
  kPerturbedSingleLayer,  // u_1^- plus a Gaussian bump
  kNearTwoLayer,          // u_2^- with layers displaced outward, plus a bump
  kCustomSamples,
};

struct InitialSpec {
  InitialKind kind = InitialKind::kPerturbedSingleLayer;
  double bump_height = 0.35;
  double bump_center = 0.25;
  double bump_width = 0.06;
  double layer_shift = 0.1;  // near-two-layer outward displacement
  double xi0 = 0.03;
  std::vector<double> samples;  // kCustomSamples only
};

State make_initial(const InitialSpec& spec, double eps, int n,
                   const Grid& grid);

struct RunOptions {
  double dt = 0.01;
  double t_end = 0.0;
  int record_stride = 1;    // record every k-th step (and the initial state)
  int snapshot_stride = 0;  // 0 disables full-field snapshots
  int track_layers = 0;     // number of layers to track (0 = none)
};

// Iterates `step`, recording series and tracked layer positions.
// Deterministic for identical inputs.  Throws BlowUpError on non-finite u.
Trajectory run(const State& initial, const Params& params, const Grid& grid,
               const RunOptions& opts);

void write_trajectory_csv(const Trajectory& traj, const std::string& path);
void write_snapshots_csv(const Trajectory& traj, const Grid& grid,
                         const std::string& path);

struct TrajectoryData {
  std::vector<double> times;
  std::vector<double> mean_u;
  std::vector<double> xi;
  std::vector<std::vector<double>> layers;
};

TrajectoryData read_trajectory_csv(const std::string& path);

}  // namespace shadow

#include "shadow/simulate.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "shadow/analyze.hpp"

namespace shadow {

namespace {

constexpr double kMaxDt = 0.1;  // explicit-reaction stability margin

double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

double reaction(double u) { return u - u * u * u; }

// Solves (I - r D2) x = rhs with the doubled Neumann off-diagonals.
void diffusion_solve(std::vector<double>& rhs, double r,
                     std::vector<double>& c_scratch) {
  const int n = static_cast<int>(rhs.size());
  auto& c = c_scratch;
  const double diag = 1.0 + 2.0 * r;
  c[0] = -2.0 * r / diag;
  rhs[0] /= diag;
  for (int i = 1; i < n; ++i) {
    const double lower = (i + 1 == n) ? -2.0 * r : -r;
    const double upper = (i + 1 == n) ? 0.0 : -r;
    const double denom = diag - lower * c[i - 1];
    c[i] = upper / denom;
    rhs[i] = (rhs[i] - lower * rhs[i - 1]) / denom;
  }
  for (int i = n - 2; i >= 0; --i) rhs[i] -= c[i] * rhs[i + 1];
}

// Matches newly found crossings to the tracked positions, nearest first.
// Unmatched tracked layers are annihilated (NaN from then on).
void update_tracked(std::vector<double>& tracked,
                    const std::vector<double>& found) {
  const std::size_t m = tracked.size();
  std::vector<bool> found_used(found.size(), false);
  std::vector<double> next(m, nan_value());
  for (std::size_t pass = 0; pass < m; ++pass) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = m, bj = found.size();
    for (std::size_t i = 0; i < m; ++i) {
      if (!std::isfinite(tracked[i]) || std::isfinite(next[i])) continue;
      for (std::size_t j = 0; j < found.size(); ++j) {
        if (found_used[j]) continue;
        const double d = std::abs(tracked[i] - found[j]);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    if (bi == m) break;
    next[bi] = found[bj];
    found_used[bj] = true;
  }
  tracked = std::move(next);
}

}  // namespace

Grid Grid::uniform(int nodes) {
  if (nodes < 3) throw std::invalid_argument("Grid: need at least 3 nodes");
  return {nodes, 1.0 / (nodes - 1)};
}

double trapezoid(std::span<const double> u, double dx) {
  double s = 0.5 * (u.front() + u.back());
  for (std::size_t i = 1; i + 1 < u.size(); ++i) s += u[i];
  return s * dx;
}

State step(const State& s, const Params& params, const Grid& grid, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  const int n = grid.nodes;
  const double r = dt * params.eps * params.eps / (grid.dx * grid.dx);

  State out;
  out.u.resize(n);
  for (int i = 0; i < n; ++i)
    out.u[i] = s.u[i] + dt * (reaction(s.u[i]) - params.alpha * s.xi);
  std::vector<double> scratch(n);
  diffusion_solve(out.u, r, scratch);

  const double mean = trapezoid(s.u, grid.dx);
  out.xi = s.xi + dt / params.tau * (params.beta * mean - params.gamma * s.xi);
  out.t = s.t + dt;

  for (double v : out.u)
    if (!std::isfinite(v)) throw BlowUpError(s.t);
  if (!std::isfinite(out.xi)) throw BlowUpError(s.t);
  return out;
}

State make_initial(const InitialSpec& spec, double eps, int n,
                   const Grid& grid) {
  State s;
  s.t = 0.0;
  s.xi = spec.xi0;
  s.u.resize(grid.nodes);

  switch (spec.kind) {
    case InitialKind::kPerturbedSingleLayer: {
      const StationaryProfile base = StationaryProfile::build(eps, n, -1);
      const double w = spec.bump_width;
      if (!(w > 0.0))
        throw std::invalid_argument("make_initial: bump_width must be positive");
      for (int i = 0; i < grid.nodes; ++i) {
        const double x = grid.x(i);
        const double dxc = (x - spec.bump_center) / w;
        s.u[i] = base(x) + spec.bump_height * std::exp(-0.5 * dxc * dxc);
      }
      break;
    }
    case InitialKind::kNearTwoLayer: {
      if (n != 2)
        throw std::invalid_argument("make_initial: near-two-layer requires n=2");
      const StationaryProfile base = StationaryProfile::build(eps, 2, -1);
      // Displace the zeros outward by ~layer_shift: sample the profile at
      // x + layer_shift * sin(2 pi x), which keeps the x -> 1-x symmetry.
      for (int i = 0; i < grid.nodes; ++i) {
        const double x = grid.x(i);
        double y = x + spec.layer_shift * std::sin(2.0 * std::numbers::pi * x);
        s.u[i] = base(y);
        if (spec.bump_height != 0.0) {
          const double w = spec.bump_width;
          if (!(w > 0.0))
            throw std::invalid_argument(
                "make_initial: bump_width must be positive");
          const double dxc = (x - spec.bump_center) / w;
          s.u[i] += spec.bump_height * std::exp(-0.5 * dxc * dxc);
        }
      }
      break;
    }
    case InitialKind::kCustomSamples: {
      if (static_cast<int>(spec.samples.size()) != grid.nodes)
        throw std::invalid_argument(
            "make_initial: custom samples must match the grid");
      s.u = spec.samples;
      break;
    }
  }
  return s;
}

Trajectory run(const State& initial, const Params& params, const Grid& grid,
               const RunOptions& opts) {
  params.validate();
  if (!(opts.t_end > 0.0))
    throw std::invalid_argument("run: t_end must be positive");
  if (!(opts.dt > 0.0) || opts.dt > kMaxDt)
    throw std::invalid_argument("run: need 0 < dt <= 0.1");
  if (opts.record_stride < 1)
    throw std::invalid_argument("run: record_stride must be >= 1");
  if (static_cast<int>(initial.u.size()) != grid.nodes)
    throw std::invalid_argument("run: initial state does not match the grid");

  const long steps =
      static_cast<long>(std::ceil(opts.t_end / opts.dt - 1e-9));

  Trajectory traj;
  traj.layers.assign(opts.track_layers, {});
  std::vector<double> tracked;
  if (opts.track_layers > 0) {
    tracked = layer_positions(initial.u, grid);
    tracked.resize(opts.track_layers, nan_value());
  }

  State s = initial;
  auto record = [&](const State& st) {
    traj.times.push_back(st.t);
    traj.mean_u.push_back(trapezoid(st.u, grid.dx));
    traj.xi.push_back(st.xi);
    if (opts.track_layers > 0) {
      update_tracked(tracked, layer_positions(st.u, grid));
      for (int j = 0; j < opts.track_layers; ++j)
        traj.layers[j].push_back(tracked[j]);
    }
    if (opts.snapshot_stride > 0) {
      traj.snapshot_times.push_back(st.t);
      traj.snapshots.push_back(st.u);
    }
  };

  record(s);
  for (long i = 1; i <= steps; ++i) {
    s = step(s, params, grid, opts.dt);
    const bool want_snapshot =
        opts.snapshot_stride > 0 && i % opts.snapshot_stride == 0;
    if (i % opts.record_stride == 0 || i == steps) {
      traj.times.push_back(s.t);
      traj.mean_u.push_back(trapezoid(s.u, grid.dx));
      traj.xi.push_back(s.xi);
      if (opts.track_layers > 0) {
        update_tracked(tracked, layer_positions(s.u, grid));
        for (int j = 0; j < opts.track_layers; ++j)
          traj.layers[j].push_back(tracked[j]);
      }
      if (want_snapshot) {
        traj.snapshot_times.push_back(s.t);
        traj.snapshots.push_back(s.u);
      }
    } else if (want_snapshot) {
      traj.snapshot_times.push_back(s.t);
      traj.snapshots.push_back(s.u);
    }
  }
  traj.final_state = std::move(s);
  return traj;
}

namespace {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "t,mean_u,xi";
  for (std::size_t j = 0; j < traj.layers.size(); ++j) out << ",layer_" << j;
  out << "\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    out << fmt17(traj.times[i]) << ',' << fmt17(traj.mean_u[i]) << ','
        << fmt17(traj.xi[i]);
    for (const auto& series : traj.layers) {
      out << ',';
      if (std::isfinite(series[i])) out << fmt17(series[i]);
    }
    out << "\n";
  }
}

void write_snapshots_csv(const Trajectory& traj, const Grid& grid,
                         const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "t";
  for (int i = 0; i < grid.nodes; ++i) out << ',' << fmt17(grid.x(i));
  out << "\n";
  for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
    out << fmt17(traj.snapshot_times[s]);
    for (double v : traj.snapshots[s]) out << ',' << fmt17(v);
    out << "\n";
  }
}

TrajectoryData read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trajectory: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty trajectory file: " + path);

  int n_layers = 0;
  {
    std::stringstream header(line);
    std::string col;
    std::vector<std::string> cols;
    while (std::getline(header, col, ',')) cols.push_back(col);
    if (cols.size() < 3 || cols[0] != "t" || cols[1] != "mean_u" ||
        cols[2] != "xi")
      throw std::runtime_error("unexpected trajectory header in " + path);
    n_layers = static_cast<int>(cols.size()) - 3;
  }

  TrajectoryData data;
  data.layers.assign(n_layers, {});
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(row, field, ',')) fields.push_back(field);
    // A trailing empty field is eaten by getline; pad.
    while (static_cast<int>(fields.size()) < 3 + n_layers)
      fields.emplace_back();
    if (static_cast<int>(fields.size()) != 3 + n_layers)
      throw std::runtime_error("malformed trajectory row in " + path);
    data.times.push_back(std::stod(fields[0]));
    data.mean_u.push_back(std::stod(fields[1]));
    data.xi.push_back(std::stod(fields[2]));
    for (int j = 0; j < n_layers; ++j)
      data.layers[j].push_back(fields[3 + j].empty()
                                   ? nan_value()
                                   : std::stod(fields[3 + j]));
  }
  return data;
}

}  // namespace shadow

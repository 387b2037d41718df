// Period extraction, relative-error series, layer trajectories and the
// anti-phase layer-position predictor.

#pragma once

#include <span>
#include <string>
#include <vector>

#include "shadow/simulate.hpp"

namespace shadow {

struct PeriodEstimate {
  double first_period;
  std::vector<double> periods;  // successive maxima gaps
  std::string method;
};

struct TooFewCyclesError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InsufficientDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Peak-to-peak periods of a (possibly drifting, non-stationary) oscillation:
// detrend by a centered moving average, locate successive maxima, refine each
// by 3-point quadratic interpolation.  `skip` discards an initial transient.
PeriodEstimate extract_periods(std::span<const double> t,
                               std::span<const double> v, double skip = 0.0);

// (1 - period_i / exact) per cycle, in percent.
std::vector<double> relative_error_series(const PeriodEstimate& est,
                                          double exact_period);

// Sign-change abscissae of the sampled field, by linear interpolation
// between adjacent nodes.  Absence of crossings is data, not an error.
std::vector<double> layer_positions(std::span<const double> u,
                                    const Grid& grid);

// Pearson correlation of the mean-removed displacements of two tracked
// layers over the time window [w_begin, w_end].  Scores below -0.5 are
// reported as anti-phase.  Throws InsufficientDataError.
double antiphase_score(std::span<const double> t, std::span<const double> l0,
                       std::span<const double> l1, double w_begin,
                       double w_end);

constexpr double kAntiphaseThreshold = -0.5;

// Predicted layer positions of the bifurcating solution of amplitude r at
// time t; sign picks the stationary branch the orbit bifurcates from.
std::vector<double> predicted_layers(int n, double eps, double lambda_In,
                                     double r, double t, int sign = -1);

struct AnalysisSummary {
  PeriodEstimate estimate;
  std::vector<double> relative_error_pct;
  double exact_period;
  bool has_antiphase = false;
  double antiphase = 0.0;
  bool antiphase_verdict = false;
  double window_begin = 0.0;
  double window_end = 0.0;
};

// Full analysis of a recorded trajectory: per-cycle periods and relative
// errors against the exact period, plus the anti-phase score of the first
// two tracked layers when both survive the window.
AnalysisSummary analyze_trajectory(const TrajectoryData& traj,
                                   double exact_period, double skip = 0.0,
                                   double window_begin = 0.0,
                                   double window_end = 200.0);

// `cycle,period,relative_error_pct` rows.
void write_analysis_csv(const AnalysisSummary& s, const std::string& path);

// Flat key=value summary record.
void write_analysis_summary(const AnalysisSummary& s, const std::string& path);

}  // namespace shadow

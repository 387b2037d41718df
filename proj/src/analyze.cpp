#include "shadow/analyze.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

namespace shadow {

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Centered moving average of constant width, mirror-padded at the ends.
std::vector<double> moving_average(std::span<const double> v, int half_width) {
  const int n = static_cast<int>(v.size());
  auto reflect = [n](int j) {
    while (j < 0 || j >= n) {
      if (j < 0) j = -j;
      if (j >= n) j = 2 * (n - 1) - j;
    }
    return j;
  };
  std::vector<double> out(n);
  double window = 0.0;
  for (int j = -half_width; j <= half_width; ++j) window += v[reflect(j)];
  const double count = 2 * half_width + 1;
  out[0] = window / count;
  for (int i = 1; i < n; ++i) {
    window += v[reflect(i + half_width)] - v[reflect(i - 1 - half_width)];
    out[i] = window / count;
  }
  return out;
}

}  // namespace

PeriodEstimate extract_periods(std::span<const double> t,
                               std::span<const double> v, double skip) {
  if (t.size() != v.size() || t.size() < 8)
    throw TooFewCyclesError("extract_periods: series too short");
  std::size_t start = 0;
  const double t_begin = t.front() + skip;
  while (start < t.size() && t[start] < t_begin) ++start;
  if (t.size() - start < 8)
    throw TooFewCyclesError("extract_periods: nothing left after skip");

  const std::span<const double> ts = t.subspan(start);
  const std::span<const double> vs = v.subspan(start);
  const std::size_t n = ts.size();

  // Coarse period from zero crossings of the mean-removed signal.
  double mean = 0.0;
  for (double x : vs) mean += x;
  mean /= static_cast<double>(n);
  std::vector<double> crossings;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double a = vs[i] - mean, b = vs[i + 1] - mean;
    if (a == 0.0)
      crossings.push_back(ts[i]);
    else if (a * b < 0.0)
      crossings.push_back(ts[i] + (ts[i + 1] - ts[i]) * a / (a - b));
  }
  if (crossings.size() < 3)
    throw TooFewCyclesError("extract_periods: fewer than two cycles visible");
  std::vector<double> gaps;
  for (std::size_t i = 0; i + 1 < crossings.size(); ++i)
    gaps.push_back(crossings[i + 1] - crossings[i]);
  const double coarse = 2.0 * median(gaps);

  // Detrend with a centered moving average of width 1.5 * coarse.
  const double dt_sample = (ts.back() - ts.front()) / (n - 1);
  const int half_width =
      std::max(1, static_cast<int>(std::lround(0.75 * coarse / dt_sample)));
  const std::vector<double> trend = moving_average(vs, half_width);
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = vs[i] - trend[i];

  // Local maxima, refined by a 3-point parabola through the samples.
  std::vector<double> maxima;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(d[i] > 0.0 && d[i] > d[i - 1] && d[i] >= d[i + 1])) continue;
    const double denom = d[i - 1] - 2.0 * d[i] + d[i + 1];
    double offset = 0.0;
    if (denom < 0.0) offset = 0.5 * (d[i - 1] - d[i + 1]) / denom;
    const double t_peak = ts[i] + offset * dt_sample;
    if (!maxima.empty() && t_peak - maxima.back() < 0.5 * coarse) {
      // Jitter produced two candidates inside one cycle; keep the later fit.
      maxima.back() = t_peak;
      continue;
    }
    maxima.push_back(t_peak);
  }
  if (maxima.size() < 2)
    throw TooFewCyclesError("extract_periods: fewer than two maxima found");

  PeriodEstimate est;
  est.method = "peak-to-peak (moving-average detrend, quadratic refinement)";
  for (std::size_t i = 0; i + 1 < maxima.size(); ++i)
    est.periods.push_back(maxima[i + 1] - maxima[i]);
  est.first_period = est.periods.front();
  return est;
}

std::vector<double> relative_error_series(const PeriodEstimate& est,
                                          double exact_period) {
  if (!(exact_period > 0.0))
    throw std::invalid_argument("relative_error_series: exact period must be positive");
  std::vector<double> out;
  out.reserve(est.periods.size());
  for (double p : est.periods)
    out.push_back((1.0 - p / exact_period) * 100.0);
  return out;
}

std::vector<double> layer_positions(std::span<const double> u,
                                    const Grid& grid) {
  std::vector<double> pos;
  for (int i = 0; i < grid.nodes; ++i) {
    if (u[i] == 0.0) {
      const double x = grid.x(i);
      if (pos.empty() || pos.back() != x) pos.push_back(x);
    }
  }
  for (int i = 0; i + 1 < grid.nodes; ++i) {
    if (u[i] * u[i + 1] < 0.0)
      pos.push_back(grid.x(i) + grid.dx * u[i] / (u[i] - u[i + 1]));
  }
  std::sort(pos.begin(), pos.end());
  return pos;
}

double antiphase_score(std::span<const double> t, std::span<const double> l0,
                       std::span<const double> l1, double w_begin,
                       double w_end) {
  if (t.size() != l0.size() || t.size() != l1.size())
    throw std::invalid_argument("antiphase_score: series lengths differ");
  std::vector<double> a, b;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < w_begin || t[i] > w_end) continue;
    if (!std::isfinite(l0[i]) || !std::isfinite(l1[i]))
      throw InsufficientDataError(
          "antiphase_score: a tracked layer is missing inside the window");
    a.push_back(l0[i]);
    b.push_back(l1[i]);
  }
  if (a.size() < 3)
    throw InsufficientDataError("antiphase_score: too few samples in window");

  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0)
    throw InsufficientDataError("antiphase_score: a layer series is constant");
  return sab / std::sqrt(saa * sbb);
}

std::vector<double> predicted_layers(int n, double eps, double lambda_In,
                                     double r, double t, int sign) {
  if (n < 1) throw std::invalid_argument("predicted_layers: n must be >= 1");
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("predicted_layers: sign must be +1 or -1");
  const double swing = 3.0 * std::numbers::sqrt2 * eps *
                       std::sin(lambda_In * t) * r;
  std::vector<double> pos;
  for (int m = 0; 1 + 4 * m <= 2 * n - 1; ++m)
    pos.push_back((1.0 + 4.0 * m) / (2.0 * n) - sign * swing);
  for (int m = 0; 3 + 4 * m <= 2 * n - 1; ++m)
    pos.push_back((3.0 + 4.0 * m) / (2.0 * n) + sign * swing);
  std::sort(pos.begin(), pos.end());
  return pos;
}

AnalysisSummary analyze_trajectory(const TrajectoryData& traj,
                                   double exact_period, double skip,
                                   double window_begin, double window_end) {
  AnalysisSummary s;
  s.exact_period = exact_period;
  s.estimate = extract_periods(traj.times, traj.mean_u, skip);
  s.relative_error_pct = relative_error_series(s.estimate, exact_period);
  s.window_begin = window_begin;
  s.window_end = window_end;
  if (traj.layers.size() >= 2) {
    try {
      s.antiphase = antiphase_score(traj.times, traj.layers[0], traj.layers[1],
                                    window_begin, window_end);
      s.has_antiphase = true;
      s.antiphase_verdict = s.antiphase < kAntiphaseThreshold;
    } catch (const InsufficientDataError&) {
      s.has_antiphase = false;
    }
  }
  return s;
}

namespace {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_analysis_csv(const AnalysisSummary& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "cycle,period,relative_error_pct\n";
  for (std::size_t i = 0; i < s.estimate.periods.size(); ++i)
    out << i << ',' << fmt17(s.estimate.periods[i]) << ','
        << fmt17(s.relative_error_pct[i]) << "\n";
}

void write_analysis_summary(const AnalysisSummary& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "first_period = " << fmt17(s.estimate.first_period) << "\n"
      << "exact_period = " << fmt17(s.exact_period) << "\n"
      << "first_relative_error_pct = " << fmt17(s.relative_error_pct.front())
      << "\n"
      << "cycles = " << s.estimate.periods.size() << "\n"
      << "method = " << s.estimate.method << "\n";
  if (s.has_antiphase) {
    out << "antiphase_score = " << fmt17(s.antiphase) << "\n"
        << "antiphase_window = [" << fmt17(s.window_begin) << ", "
        << fmt17(s.window_end) << "]\n"
        << "antiphase = " << (s.antiphase_verdict ? "yes" : "no") << "\n";
  }
}

}  // namespace shadow

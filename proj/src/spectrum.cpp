#include "shadow/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace shadow {

namespace {

constexpr double kPi = std::numbers::pi;

double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

// 2(delta+2) - 3 delta (1 - <u^2,1>): the combination entering both the
// discriminant and the outer bracket of the closed forms.
double bracket_term(double delta, const StationaryProfile& p) {
  return 2.0 * (delta + 2.0) - 3.0 * delta * p.one_minus_mass2();
}

}  // namespace

std::pair<double, double> mu_extremes(const StationaryProfile& p) {
  const double s = p.one_minus_rho2();
  const double root = std::sqrt(1.0 + 3.0 * s * s);
  return {-1.0 + root, -1.0 - root};
}

double mu_asymptotic(int j, int n, double eps) {
  if (j < 0) throw std::invalid_argument("mu_asymptotic: j must be >= 0");
  const double ne = n * eps;
  if (j < n) {
    const double c = std::cos(j * kPi / (2.0 * n));
    return 96.0 * c * c * std::exp(-std::numbers::sqrt2 / ne);
  }
  if (j < 2 * n) {
    const double c = std::cos((j - n) * kPi / n);
    return -1.5 + 12.0 * c * std::exp(-1.0 / (std::numbers::sqrt2 * ne));
  }
  if (j == 2 * n) return -2.0 - 96.0 * std::exp(-std::numbers::sqrt2 / ne);
  const double q = (j - 2 * n) * kPi * eps;
  return -2.0 - q * q;
}

CubicCoeffs cubic_coeffs(const Params& params, const StationaryProfile& p) {
  params.validate();
  const double delta = params.delta();
  const double tg = params.tau / params.gamma;
  const double s = p.one_minus_rho2();
  return {tg, 2.0 * tg + 1.0, delta + 2.0 - 3.0 * tg * s * s,
          3.0 * delta * p.one_minus_mass2() - 3.0 * s * s};
}

std::complex<double> eval_cubic(const CubicCoeffs& c, std::complex<double> z) {
  return ((c.c3 * z + c.c2) * z + c.c1) * z + c.c0;
}

namespace {

std::complex<double> eval_cubic_derivative(const CubicCoeffs& c,
                                           std::complex<double> z) {
  return (3.0 * c.c3 * z + 2.0 * c.c2) * z + c.c1;
}

void newton_polish(const CubicCoeffs& c, std::complex<double>& z) {
  for (int i = 0; i < 3; ++i) {
    const std::complex<double> d = eval_cubic_derivative(c, z);
    if (d == 0.0) return;
    const std::complex<double> step = eval_cubic(c, z) / d;
    z -= step;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(z))) return;
  }
}

std::vector<SpectralPoint> quadratic_roots(double a, double b, double c) {
  // a z^2 + b z + c with a != 0.
  const double disc = b * b - 4.0 * a * c;
  if (disc >= 0.0) {
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    double r0, r1;
    if (q != 0.0) {
      r0 = q / a;
      r1 = c / q;
    } else {
      r0 = r1 = 0.0;
    }
    if (r0 > r1) std::swap(r0, r1);
    return {{r0, 0.0}, {r1, 0.0}};
  }
  const double re = -0.5 * b / a;
  const double im = std::abs(0.5 * std::sqrt(-disc) / a);
  return {{re, im}, {re, -im}};
}

}  // namespace

std::vector<SpectralPoint> cubic_roots(const CubicCoeffs& c) {
  const double scale =
      std::max({1.0, std::abs(c.c3), std::abs(c.c2), std::abs(c.c1),
                std::abs(c.c0)});
  if (c.c3 == 0.0) {
    if (c.c2 == 0.0) {
      if (c.c1 == 0.0)
        throw std::invalid_argument("cubic_roots: degenerate coefficients");
      return {{-c.c0 / c.c1, 0.0}};
    }
    return quadratic_roots(c.c2, c.c1, c.c0);
  }

  // Depressed cubic t^3 + p t + q via lambda = t - a/3.
  const double a = c.c2 / c.c3;
  const double b = c.c1 / c.c3;
  const double d = c.c0 / c.c3;
  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + d;
  const double shift = -a / 3.0;
  const double disc = -4.0 * p * p * p - 27.0 * q * q;

  std::vector<std::complex<double>> roots;
  if (disc > 0.0) {
    // Three distinct real roots; trigonometric form.
    const double r = 2.0 * std::sqrt(-p / 3.0);
    double arg = 3.0 * q / (p * r);
    arg = std::clamp(arg, -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k)
      roots.emplace_back(shift + r * std::cos(theta - 2.0 * kPi * k / 3.0),
                         0.0);
  } else {
    // One real root plus a conjugate pair (Cardano, cancellation-safe branch).
    const double s = std::sqrt(std::max(0.0, q * q / 4.0 + p * p * p / 27.0));
    const double u = std::cbrt(q >= 0.0 ? -q / 2.0 - s : -q / 2.0 + s);
    const double v = (u == 0.0) ? 0.0 : -p / (3.0 * u);
    const double t_real = u + v;
    roots.emplace_back(shift + t_real, 0.0);
    const double re = shift - 0.5 * t_real;
    const double im = 0.5 * std::numbers::sqrt3 * std::abs(u - v);
    roots.emplace_back(re, im);
    roots.emplace_back(re, -im);
  }

  for (auto& z : roots) newton_polish(c, z);

  // Restore exact conjugate symmetry after polishing.
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (roots[i].imag() <= 0.0) continue;
    for (std::size_t j = 0; j < roots.size(); ++j) {
      if (j != i && roots[j].imag() < 0.0) {
        const double re = 0.5 * (roots[i].real() + roots[j].real());
        const double im = 0.5 * (roots[i].imag() - roots[j].imag());
        roots[i] = {re, im};
        roots[j] = {re, -im};
      }
    }
  }

  std::vector<SpectralPoint> out;
  for (const auto& z : roots) {
    if (std::abs(eval_cubic(c, z)) > 1e-10 * scale)
      throw std::runtime_error("cubic_roots: refinement failed the residual target");
    out.push_back({z.real(), z.imag()});
  }
  std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) {
    return l.im != r.im ? l.im < r.im : l.re < r.re;
  });
  return out;
}

HopfData hopf_point(const Params& params, int n) {
  params.validate();
  const StationaryProfile p = StationaryProfile::build(params.eps, n, -1);
  const double delta = params.delta();
  const double chi_n = chi(p);
  const double s = p.one_minus_rho2();
  const double S = s * s;
  const double B = bracket_term(delta, p);
  const double D = B * B + 24.0 * (delta + 2.0) * S;
  const double sqrtD = std::sqrt(D);

  HopfData h;
  h.chi_n = chi_n;
  h.discriminant = D;
  h.valid = chi_n < delta;

  // sqrt(D) - B rationalized: at sharp layers S is exponentially small and
  // the direct subtraction loses every digit.
  const double sqrtD_minus_B =
      B >= 0.0 ? 24.0 * (delta + 2.0) * S / (sqrtD + B) : sqrtD - B;
  // lambda^2 = (sqrt(D) - B - 6S)/2 through the same rationalization;
  // delta (1 - <u^2>) - S is positive exactly when chi_n < delta.
  const double lambda_sq = 18.0 * S *
                           (delta * p.one_minus_mass2() - S) /
                           (sqrtD + B + 6.0 * S);

  h.lambda_In = lambda_sq > 0.0 ? std::sqrt(lambda_sq) : nan_value();
  h.tau_n = 2.0 * (delta + 2.0) * params.gamma / sqrtD_minus_B;
  h.period = 2.0 * kPi / h.lambda_In;

  if (h.valid) {
    // The same tau through the frequency relation; the two routes are
    // algebraically identical and must agree to roundoff.
    const double tau_b =
        (delta + 2.0) * params.gamma / (lambda_sq + 3.0 * S);
    if (std::abs(h.tau_n - tau_b) > 1e-12 * std::abs(h.tau_n))
      throw std::logic_error("hopf_point: inconsistent tau routes");
  } else {
    h.tau_n = nan_value();
    h.period = nan_value();
    h.lambda_In = nan_value();
  }
  return h;
}

HopfAsymptotics hopf_asymptotics(int n, double eps, const Params& params) {
  const double delta = params.delta();
  const double ne = n * eps;
  const double s2ne = std::numbers::sqrt2 * ne;
  HopfAsymptotics a;
  a.period = kPi / 12.0 * std::sqrt((delta + 2.0) / delta) / std::sqrt(s2ne) *
             std::exp(1.0 / s2ne);
  a.tau = params.gamma * (delta + 2.0) / 192.0 *
          std::exp(std::numbers::sqrt2 / ne);
  a.chi = 16.0 * std::numbers::sqrt2 / ne *
          std::exp(-std::numbers::sqrt2 / ne);
  return a;
}

namespace {

// The cubic root with positive imaginary part, if the pair exists.
bool complex_pair(const Params& params, const StationaryProfile& p, double tau,
                  SpectralPoint& out) {
  Params q = params;
  q.tau = tau;
  const auto roots = cubic_roots(cubic_coeffs(q, p));
  for (const auto& r : roots)
    if (r.im > 0.0) {
      out = r;
      return true;
    }
  return false;
}

}  // namespace

PairTrack track_pair(const Params& params, int n, double tau_lo, double tau_hi,
                     int samples) {
  if (!(tau_lo > 0.0) || !(tau_hi > tau_lo))
    throw std::invalid_argument("track_pair: need 0 < tau_lo < tau_hi");
  const StationaryProfile p = StationaryProfile::build(params.eps, n, -1);

  PairTrack track;
  track.path.reserve(samples + 1);
  for (int i = 0; i <= samples; ++i) {
    const double tau = tau_lo + (tau_hi - tau_lo) * i / samples;
    SpectralPoint pt;
    if (!complex_pair(params, p, tau, pt))
      throw NoComplexPairError(
          "track_pair: cubic has no complex pair inside the bracket");
    track.path.push_back({tau, pt});
  }

  const double re_lo = track.path.front().lambda.re;
  const double re_hi = track.path.back().lambda.re;
  if (!(re_lo < 0.0 && re_hi > 0.0))
    throw NoSignChangeError("track_pair: Re(pair) does not change sign");

  double lo = tau_lo, hi = tau_hi;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    SpectralPoint pt;
    if (!complex_pair(params, p, mid, pt))
      throw NoComplexPairError("track_pair: pair lost during bisection");
    (pt.re < 0.0 ? lo : hi) = mid;
  }
  track.tau_star = 0.5 * (lo + hi);
  return track;
}

// d(lambda)/d(tau) = -g_tau/g_lambda at (i lambda_In, tau_n), split into
// zeta_R, zeta_I and Delta = gamma |g_lambda|^2.  Note g_lambda carries the
// term 6 (tau/gamma)(1-rho^2)^2 in its real part; it vanishes exponentially
// at sharp layers but is far from negligible at moderate eps, and the
// finite-difference oracle resolves it.
TransversalityData transversality(const Params& params, int n) {
  const HopfData h = hopf_point(params, n);
  if (!h.valid)
    throw std::domain_error("transversality: hypothesis chi_n < delta fails");
  const StationaryProfile p = StationaryProfile::build(params.eps, n, -1);
  const double delta = params.delta();
  const double s = p.one_minus_rho2();
  const double S = s * s;
  const double lam = h.lambda_In;
  const double lam2 = lam * lam;
  const double z = lam2 + 3.0 * S;
  const double tg = h.tau_n / params.gamma;
  const double w = 4.0 * tg + 2.0;
  const double gl_re = -2.0 * (delta + 2.0) + 6.0 * tg * S;

  TransversalityData t;
  t.zeta_R = 2.0 * lam2 * z + 12.0 * tg * S * lam2;
  t.zeta_I = -2.0 * (delta + 2.0) * lam * z - 2.0 * lam * lam2 * w +
             6.0 * (delta + 2.0) * S * lam;
  t.Delta = (gl_re * gl_re + lam2 * w * w) * params.gamma;
  t.dRe_dtau = t.zeta_R / t.Delta;
  t.dIm_dtau = t.zeta_I / t.Delta;
  return t;
}

ResolventField::ResolventField(const StationaryProfile& p,
                               std::complex<double> lambda)
    : profile_(&p), lambda_(lambda) {
  const double s = p.one_minus_rho2();
  denom_ = lambda * lambda + 2.0 * lambda - 3.0 * s * s;
  const double scale = std::norm(lambda) + 2.0 * std::abs(lambda) + 1.0;
  if (std::abs(denom_) < 1e-13 * scale)
    throw std::domain_error("resolvent: lambda at a pole (mu_0 or mu_n)");
}

std::complex<double> ResolventField::operator()(double x) const {
  const double u = (*profile_)(x);
  return (-(3.0 + lambda_) + 3.0 * u * u) / denom_;
}

ResolventField resolvent_one(const StationaryProfile& p,
                             std::complex<double> lambda) {
  return ResolventField(p, lambda);
}

std::complex<double> h_function(const Params& params,
                                const StationaryProfile& p,
                                std::complex<double> lambda) {
  const std::complex<double> pole = params.tau * lambda + params.gamma;
  if (std::abs(pole) < 1e-13 * std::max(1.0, std::abs(params.tau * lambda)))
    throw std::domain_error("h_function: lambda at the pole -gamma/tau");
  const ResolventField phi(p, lambda);  // checks the mu_0 / mu_n poles
  const std::complex<double> inner =
      (-(3.0 + lambda) + 3.0 * p.mass2()) / phi.denominator();
  return 1.0 - params.alpha * params.beta / pole * inner;
}

double simplicity_margin(const Params& params, int n) {
  const HopfData h = hopf_point(params, n);
  if (!h.valid)
    throw std::domain_error("simplicity_margin: hypothesis chi_n < delta fails");
  const StationaryProfile p = StationaryProfile::build(params.eps, n, -1);
  return 6.0 * h.lambda_In * (1.0 - p.mass2()) +
         4.0 * h.lambda_In * (params.delta() + 2.0) * params.gamma /
             (params.alpha * params.beta);
}

StabilityVerdict classify_stability(const Params& params, int n) {
  const HopfData h = hopf_point(params, n);
  StabilityVerdict v;
  v.valid = h.valid;
  v.tau_n = h.tau_n;
  v.mu0_asym = mu_asymptotic(0, n, params.eps);
  v.mu1_asym = n >= 2 ? mu_asymptotic(1, n, params.eps) : nan_value();
  if (!h.valid) {
    v.label = "hypothesis-violated";
    v.hopf_unstable = false;
    return v;
  }
  v.hopf_unstable = params.tau > h.tau_n;
  if (n == 1)
    v.label = params.tau < h.tau_n ? "stable" : "unstable";
  else
    v.label = params.tau < h.tau_n ? "metastable" : "unstable";
  return v;
}

}  // namespace shadow

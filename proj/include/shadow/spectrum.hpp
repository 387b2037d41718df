// Spectral data of the linearization around the n-layer states: the cubic
// carrying the nonlocal eigenvalues, the exact Hopf point (tau_n, lambda_I,n),
// eigenvalue tracking across the crossing, transversality and simplicity
// quantities, and small-eps asymptotics.

#pragma once

#include <complex>
#include <string>
#include <vector>

#include "shadow/stationary.hpp"

namespace shadow {

struct SpectralPoint {
  double re;
  double im;

  std::complex<double> value() const { return {re, im}; }
};

struct HopfData {
  double tau_n;        // critical time constant
  double lambda_In;    // positive frequency at the crossing
  double period;       // 2 pi / lambda_In
  double chi_n;        // threshold value of the hypothesis chi_n < delta
  double discriminant; // D under the outer square root
  bool valid;          // chi_n < delta
};

struct TransversalityData {
  double zeta_R;
  double zeta_I;
  double Delta;
  double dRe_dtau;  // zeta_R / Delta, positive
  double dIm_dtau;  // zeta_I / Delta, negative
};

// g(lambda, tau) = c3 l^3 + c2 l^2 + c1 l + c0 with real coefficients.
struct CubicCoeffs {
  double c3;
  double c2;
  double c1;
  double c0;
};

struct HopfAsymptotics {
  double period;
  double tau;
  double chi;
};

struct PairSample {
  double tau;
  SpectralPoint lambda;  // the root with positive imaginary part
};

struct PairTrack {
  double tau_star;                // where Re crosses zero
  std::vector<PairSample> path;
};

struct StabilityVerdict {
  bool valid;            // hypothesis chi_n < delta
  std::string label;     // "stable" | "unstable" | "metastable"
  double tau_n;
  bool hopf_unstable;    // tau > tau_n
  double mu0_asym;       // asymptotic magnitude of the largest eigenvalue of L
  double mu1_asym;       // bound for the positive real spectrum when n >= 2
};

// Extreme eigenvalues of the scalar operator: roots of mu^2+2mu-3(1-rho^2)^2.
// Returns (mu_0, mu_n) with mu_0 > 0 > mu_n.
std::pair<double, double> mu_extremes(const StationaryProfile& p);

// Four-branch small-eps asymptotic value of mu_j^(n).
double mu_asymptotic(int j, int n, double eps);

CubicCoeffs cubic_coeffs(const Params& params, const StationaryProfile& p);

// All roots of the cubic (conjugate pair returned as such); handles the
// quadratic degeneration c3 = 0.  Signals ill-conditioning by throwing when
// refinement cannot reach the residual target.
std::vector<SpectralPoint> cubic_roots(const CubicCoeffs& c);

std::complex<double> eval_cubic(const CubicCoeffs& c, std::complex<double> z);

// Exact Hopf point from the closed forms.  When chi_n >= delta the result
// carries valid = false (and NaN where the formulas have no real value).
HopfData hopf_point(const Params& params, int n);

// Leading-order formulas for (period, tau_n, chi_n) as eps -> 0.
HopfAsymptotics hopf_asymptotics(int n, double eps, const Params& params);

// Follows the complex pair over [tau_lo, tau_hi] and locates the real-part
// zero crossing by bisection.  Throws NoComplexPairError / NoSignChangeError.
PairTrack track_pair(const Params& params, int n, double tau_lo, double tau_hi,
                     int samples = 64);

struct NoComplexPairError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoSignChangeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

TransversalityData transversality(const Params& params, int n);

// phi = (L - lambda)^{-1}[1] in closed form.
class ResolventField {
 public:
  ResolventField(const StationaryProfile& p, std::complex<double> lambda);
  std::complex<double> operator()(double x) const;
  std::complex<double> denominator() const { return denom_; }

 private:
  const StationaryProfile* profile_;
  std::complex<double> lambda_;
  std::complex<double> denom_;
};

ResolventField resolvent_one(const StationaryProfile& p,
                             std::complex<double> lambda);

// h(lambda) = 1 - alpha beta/(tau lambda + gamma) <(L-lambda)^{-1}[1], 1>,
// evaluated in closed form through the mass integral.
std::complex<double> h_function(const Params& params,
                                const StationaryProfile& p,
                                std::complex<double> lambda);

// Imaginary part of the nondegeneracy expression at the crossing; positivity
// certifies that the Hopf pair is algebraically simple.
double simplicity_margin(const Params& params, int n);

StabilityVerdict classify_stability(const Params& params, int n);

}  // namespace shadow

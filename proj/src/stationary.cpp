#include "shadow/stationary.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace shadow {

void Params::validate() const {
  std::ostringstream bad;
  auto check = [&bad](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) bad << name << " must be positive; ";
  };
  check(eps, "eps");
  check(tau, "tau");
  check(alpha, "alpha");
  check(beta, "beta");
  check(gamma, "gamma");
  if (!bad.str().empty()) throw std::invalid_argument("Params: " + bad.str());
}

namespace {

// Left side of the modulus equation as a function of m1; strictly increasing
// in k, hence strictly decreasing in m1.
double modulus_lhs(double m1) {
  const Modulus m = Modulus::from_m1(m1);
  return std::sqrt(1.0 + m.k2()) * ellip_K(m);
}

}  // namespace

Modulus solve_modulus(double eps, int n) {
  if (n < 1) throw std::domain_error("solve_modulus: n must be >= 1");
  if (!(eps > 0.0) || !(eps < 1.0 / (n * std::numbers::pi)))
    throw std::domain_error(
        "solve_modulus: need 0 < eps < 1/(n pi) for an n-layer solution");
  const double target = 1.0 / (2.0 * n * eps);

  // Bisection on m1: lhs(1) = pi/2 < target, lhs(m1) -> infinity as m1 -> 0.
  double lo = std::numeric_limits<double>::min();  // lhs(lo) > target
  double hi = 1.0;                                 // lhs(hi) < target
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval exhausted at this precision
    if (modulus_lhs(mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  return Modulus::from_m1(hi);
}

StationaryProfile::StationaryProfile(double eps, int n, int sign, Modulus m)
    : eps_(eps), n_(n), sign_(sign), modulus_(m) {
  K_ = ellip_K(modulus_);
  const double k2 = modulus_.k2();
  rho_ = std::sqrt(2.0 * k2 / (1.0 + k2));
  const double E = ellip_E(modulus_);
  mass2_ = 2.0 / (1.0 + k2) * (1.0 - E / K_);
  one_minus_mass2_ = (2.0 * E / K_ - modulus_.m1()) / (1.0 + k2);
  layers_.reserve(n);
  for (int l = 0; l < n; ++l)
    layers_.push_back((1.0 + 2.0 * l) / (2.0 * n));
}

StationaryProfile StationaryProfile::build(double eps, int n, int sign) {
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("StationaryProfile: sign must be +1 or -1");
  return StationaryProfile(eps, n, sign, solve_modulus(eps, n));
}

double StationaryProfile::operator()(double x) const {
  return sign_ * rho_ * jacobi_sn((2.0 * n_ * x + 1.0) * K_, modulus_);
}

double StationaryProfile::one_minus_rho2() const {
  return modulus_.m1() / (1.0 + modulus_.k2());
}

double mass_squared(const StationaryProfile& p) { return p.mass2(); }

double chi(const StationaryProfile& p) {
  const Modulus& m = p.modulus();
  const double K = ellip_K(m);
  const double E = ellip_E(m);
  return m.m1() * m.m1() * K /
         ((1.0 + m.k2()) * (2.0 * E - m.m1() * K));
}

}  // namespace shadow

// Exact n-layer stationary solutions of the shadow system on [0,1] and the
// scalar quantities derived from them.

#pragma once

#include <stdexcept>
#include <vector>

#include "shadow/elliptic.hpp"

namespace shadow {

// The five positive constants of the system; delta = alpha*beta/gamma is
// always recomputed from the base fields.
struct Params {
  double eps;
  double tau;
  double alpha;
  double beta;
  double gamma;

  double delta() const { return alpha * beta / gamma; }

  // Throws std::invalid_argument listing every violated condition.
  void validate() const;
};

// The unique modulus k with sqrt(1+k^2) K(k) = 1/(2 n eps).
// Requires 0 < eps < 1/(n pi); throws std::domain_error otherwise.
Modulus solve_modulus(double eps, int n);

class StationaryProfile {
 public:
  // sign = +1 or -1 selects the branch whose value at x = 0 is sign * rho.
  static StationaryProfile build(double eps, int n, int sign);

  double operator()(double x) const;

  int layer_count() const { return n_; }
  int sign() const { return sign_; }
  double eps() const { return eps_; }
  const Modulus& modulus() const { return modulus_; }
  double rho() const { return rho_; }             // amplitude, in (0,1)
  double mass2() const { return mass2_; }         // integral of u^2 over [0,1]
  const std::vector<double>& layers() const { return layers_; }

  // 1 - rho^2 computed as m1/(1+k^2); exact at sharp layers where the
  // direct subtraction cancels.
  double one_minus_rho2() const;

  // 1 - mass2 as (2E/K - m1)/(1+k^2), cancellation-free on both ends.
  double one_minus_mass2() const { return one_minus_mass2_; }

 private:
  StationaryProfile(double eps, int n, int sign, Modulus m);
  double eps_;
  int n_;
  int sign_;
  Modulus modulus_;
  double K_;
  double rho_;
  double mass2_;
  double one_minus_mass2_;
  std::vector<double> layers_;
};

// (2/(1+k^2)) (1 - E/K); identical to p.mass2().
double mass_squared(const StationaryProfile& p);

// chi_n = (1-k^2)^2 K / [(1+k^2)(2E - (1-k^2)K)]; strictly positive.
double chi(const StationaryProfile& p);

}  // namespace shadow

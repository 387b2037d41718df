// Test-support verifiers: discretized operators, shift-based eigenvalue
// estimation, residual checks and adaptive quadrature.  Everything here is
// an independent route against which the closed forms are compared; nothing
// in the library proper depends on it.

#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace shadow::oracle {

// Finite-difference operator on [0,1] with second-order Neumann closure.
// Two flavours:
//   - scalar():   L = eps^2 D2 + diag(fprime)                (size = nodes)
//   - nonlocal(): the block operator [[L, -alpha], [beta/tau <.,1>, -gamma/tau]]
//                 acting on (u_0..u_{N}, eta)                (size = nodes + 1)
class DiscreteOperator {
 public:
  static DiscreteOperator scalar(double eps, std::vector<double> fprime,
                                 double dx);
  static DiscreteOperator nonlocal(double eps, std::vector<double> fprime,
                                   double dx, double alpha, double beta,
                                   double gamma, double tau);

  int size() const { return size_; }

  void apply(std::span<const double> v, std::span<double> out) const;
  void apply(std::span<const std::complex<double>> v,
             std::span<std::complex<double>> out) const;

  // Solves (L - sigma I) x = rhs by tridiagonal elimination (scalar flavour).
  std::vector<std::complex<double>> solve_shifted(
      std::complex<double> sigma,
      std::span<const std::complex<double>> rhs) const;

  double dx() const { return dx_; }
  int nodes() const { return static_cast<int>(fprime_.size()); }

  // Crude upper bound on the spectral radius; sets the attainable residual
  // floor of iterative eigenvalue estimates.
  double norm_bound() const;

 private:
  DiscreteOperator() = default;
  bool nonlocal_ = false;
  int size_ = 0;
  double eps2_ = 0.0;
  double dx_ = 1.0;
  std::vector<double> fprime_;
  double alpha_ = 0.0, beta_ = 0.0, gamma_ = 0.0, tau_ = 1.0;

  template <typename T>
  void apply_impl(std::span<const T> v, std::span<T> out) const;
};

struct EigenEstimate {
  double value;
  double residual;  // ||L v - value v||_inf on the unit eigenvector
  int iterations;
};

// Eigenvalue of the scalar operator nearest `shift`, by power iteration on
// the shifted inverse.  Throws on non-convergence.
EigenEstimate dominant_eig(const DiscreteOperator& op, double shift,
                           int max_iterations = 500, double tol = 1e-12);

// max-norm of (L_h - lambda) phi - 1 over interior nodes.
double resolvent_residual(const DiscreteOperator& op,
                          std::complex<double> lambda,
                          std::span<const std::complex<double>> phi);

// Discrete counterpart of the scalar eigenvalue condition
//   h(lambda) = 1 - alpha beta / (tau lambda + gamma) <(L-lambda)^{-1}[1], 1>
// with the trapezoid inner product.
std::complex<double> discrete_h(const DiscreteOperator& op, double alpha,
                                double beta, double gamma, double tau,
                                std::complex<double> lambda);

// Root of discrete_h near `guess` by the secant method; this is the complex
// eigenvalue of the assembled nonlocal discretization.
std::complex<double> discrete_pair_eig(const DiscreteOperator& op,
                                       double alpha, double beta, double gamma,
                                       double tau, std::complex<double> guess);

// Adaptive composite Simpson.  Throws when the tolerance cannot be met.
double quadrature(const std::function<double(double)>& f, double a, double b,
                  double tol = 1e-12);

// Adaptive composite 12-point Gauss-Legendre; used where the integrand is
// smooth but steep (elliptic integrands after the s = sin(theta) map).
double gauss_quadrature(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-13);

}  // namespace shadow::oracle

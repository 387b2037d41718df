#include "shadow/oracle.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace shadow::oracle {

DiscreteOperator DiscreteOperator::scalar(double eps,
                                          std::vector<double> fprime,
                                          double dx) {
  DiscreteOperator op;
  op.nonlocal_ = false;
  op.size_ = static_cast<int>(fprime.size());
  op.eps2_ = eps * eps;
  op.dx_ = dx;
  op.fprime_ = std::move(fprime);
  return op;
}

DiscreteOperator DiscreteOperator::nonlocal(double eps,
                                            std::vector<double> fprime,
                                            double dx, double alpha,
                                            double beta, double gamma,
                                            double tau) {
  DiscreteOperator op;
  op.nonlocal_ = true;
  op.size_ = static_cast<int>(fprime.size()) + 1;
  op.eps2_ = eps * eps;
  op.dx_ = dx;
  op.fprime_ = std::move(fprime);
  op.alpha_ = alpha;
  op.beta_ = beta;
  op.gamma_ = gamma;
  op.tau_ = tau;
  return op;
}

template <typename T>
void DiscreteOperator::apply_impl(std::span<const T> v,
                                  std::span<T> out) const {
  const int n = nodes();
  const double r = eps2_ / (dx_ * dx_);
  // Neumann by ghost reflection: u_{-1} = u_1, u_{n} = u_{n-2}.
  out[0] = r * (2.0 * v[1] - 2.0 * v[0]) + fprime_[0] * v[0];
  for (int i = 1; i + 1 < n; ++i)
    out[i] = r * (v[i - 1] - 2.0 * v[i] + v[i + 1]) + fprime_[i] * v[i];
  out[n - 1] =
      r * (2.0 * v[n - 2] - 2.0 * v[n - 1]) + fprime_[n - 1] * v[n - 1];
  if (nonlocal_) {
    const T eta = v[n];
    for (int i = 0; i < n; ++i) out[i] -= alpha_ * eta;
    // trapezoid <u,1>
    T integ = 0.5 * (v[0] + v[n - 1]);
    for (int i = 1; i + 1 < n; ++i) integ += v[i];
    integ *= dx_;
    out[n] = (beta_ * integ - gamma_ * eta) / tau_;
  }
}

double DiscreteOperator::norm_bound() const {
  double fp = 0.0;
  for (double v : fprime_) fp = std::max(fp, std::abs(v));
  return 4.0 * eps2_ / (dx_ * dx_) + fp + std::abs(alpha_) +
         (std::abs(beta_) + std::abs(gamma_)) / tau_;
}

void DiscreteOperator::apply(std::span<const double> v,
                             std::span<double> out) const {
  apply_impl(v, out);
}

void DiscreteOperator::apply(std::span<const std::complex<double>> v,
                             std::span<std::complex<double>> out) const {
  apply_impl(v, out);
}

std::vector<std::complex<double>> DiscreteOperator::solve_shifted(
    std::complex<double> sigma,
    std::span<const std::complex<double>> rhs) const {
  if (nonlocal_)
    throw std::logic_error("solve_shifted: scalar operator required");
  using C = std::complex<double>;
  const int n = nodes();
  const double r = eps2_ / (dx_ * dx_);
  // Thomas elimination on (L - sigma I); off-diagonals are r except for the
  // doubled Neumann entries in the first and last rows.
  std::vector<C> c(n), d(n);
  C diag0 = fprime_[0] - 2.0 * r - sigma;
  c[0] = 2.0 * r / diag0;
  d[0] = rhs[0] / diag0;
  for (int i = 1; i < n; ++i) {
    const double upper = (i + 1 == n) ? 0.0 : r;
    const double lower = (i + 1 == n) ? 2.0 * r : r;
    const C diag = fprime_[i] - 2.0 * r - sigma;
    const C denom = diag - lower * c[i - 1];
    c[i] = upper / denom;
    d[i] = (rhs[i] - lower * d[i - 1]) / denom;
  }
  std::vector<C> x(n);
  x[n - 1] = d[n - 1];
  for (int i = n - 2; i >= 0; --i) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

EigenEstimate dominant_eig(const DiscreteOperator& op, double shift,
                           int max_iterations, double tol) {
  const int n = op.size();
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<std::complex<double>> v(n);
  for (auto& x : v) x = unif(rng);

  // Applying L to an eigenvector cancels terms of size ~norm_bound, so the
  // residual cannot drop below roundoff at that scale.
  const double floor = 32.0 * 1e-16 * std::max(1.0, op.norm_bound());
  double mu = shift;
  for (int it = 1; it <= max_iterations; ++it) {
    auto w = op.solve_shifted(shift, v);
    double norm = 0.0;
    for (const auto& x : w) norm += std::norm(x);
    norm = std::sqrt(norm);
    for (auto& x : w) x /= norm;

    std::vector<std::complex<double>> Lw(n);
    op.apply(std::span<const std::complex<double>>(w),
             std::span<std::complex<double>>(Lw));
    std::complex<double> rq = 0.0;
    for (int i = 0; i < n; ++i) rq += std::conj(w[i]) * Lw[i];
    mu = rq.real();
    double res = 0.0;
    double winf = 0.0;
    for (int i = 0; i < n; ++i) {
      res = std::max(res, std::abs(Lw[i] - mu * w[i]));
      winf = std::max(winf, std::abs(w[i]));
    }
    v = std::move(w);
    if (res < std::max(tol * std::max(1.0, std::abs(mu)), floor * winf))
      return {mu, res, it};
  }
  throw std::runtime_error("dominant_eig: power iteration did not converge");
}

double resolvent_residual(const DiscreteOperator& op,
                          std::complex<double> lambda,
                          std::span<const std::complex<double>> phi) {
  const int n = op.size();
  std::vector<std::complex<double>> out(n);
  op.apply(phi, std::span<std::complex<double>>(out));
  double res = 0.0;
  for (int i = 1; i + 1 < n; ++i)
    res = std::max(res, std::abs(out[i] - lambda * phi[i] - 1.0));
  return res;
}

std::complex<double> discrete_h(const DiscreteOperator& op, double alpha,
                                double beta, double gamma, double tau,
                                std::complex<double> lambda) {
  const int n = op.size();
  std::vector<std::complex<double>> ones(n, 1.0);
  auto phi = op.solve_shifted(lambda, ones);
  std::complex<double> integ = 0.5 * (phi[0] + phi[n - 1]);
  for (int i = 1; i + 1 < n; ++i) integ += phi[i];
  integ *= op.dx();
  return 1.0 - alpha * beta / (tau * lambda + gamma) * integ;
}

std::complex<double> discrete_pair_eig(const DiscreteOperator& op,
                                       double alpha, double beta, double gamma,
                                       double tau, std::complex<double> guess) {
  std::complex<double> x0 = guess * 1.001 + std::complex<double>(0.0, 1e-6);
  std::complex<double> x1 = guess;
  std::complex<double> f0 = discrete_h(op, alpha, beta, gamma, tau, x0);
  for (int it = 0; it < 80; ++it) {
    const std::complex<double> f1 = discrete_h(op, alpha, beta, gamma, tau, x1);
    if (std::abs(f1) < 1e-14) return x1;
    const std::complex<double> dx = (x1 - x0) / (f1 - f0) * f1;
    x0 = x1;
    f0 = f1;
    x1 -= dx;
    if (std::abs(dx) < 1e-15 * std::max(1.0, std::abs(x1))) return x1;
  }
  throw std::runtime_error("discrete_pair_eig: secant did not converge");
}

namespace {

double simpson_recurse(const std::function<double(double)>& f, double a,
                       double b, double fa, double fm, double fb, double whole,
                       double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double both = left + right;
  const double floor = 4.0 * 1e-16 * (std::abs(both) + std::abs(whole));
  if (std::abs(both - whole) <= std::max(15.0 * tol, floor))
    return both + (both - whole) / 15.0;
  if (depth <= 0)
    throw std::runtime_error("quadrature: tolerance not met");
  return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

// 12-point Gauss-Legendre nodes/weights on [-1,1] (positive half; symmetric).
constexpr double kGaussX[6] = {0.1252334085114689154, 0.3678314989981801938,
                               0.5873179542866174473, 0.7699026741943046870,
                               0.9041172563704748566, 0.9815606342467192506};
constexpr double kGaussW[6] = {0.2491470458134027850, 0.2334925365383548087,
                               0.2031674267230659217, 0.1600783285433462263,
                               0.1069393259953184309, 0.0471753363865118271};

double gauss_panel(const std::function<double(double)>& f, double a,
                   double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 6; ++i)
    s += kGaussW[i] * (f(c - h * kGaussX[i]) + f(c + h * kGaussX[i]));
  return s * h;
}

// The panel tolerance is deliberately not shrunk on descent: the 12-point
// rule gains ~24 orders per halving, so the sum of accepted panel errors
// stays within a small multiple of tol.
double gauss_recurse(const std::function<double(double)>& f, double a,
                     double b, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double left = gauss_panel(f, a, m);
  const double right = gauss_panel(f, m, b);
  const double floor =
      4.0 * 1e-16 * (std::abs(left) + std::abs(right) + std::abs(whole));
  if (std::abs(left + right - whole) <= std::max(tol, floor))
    return left + right;
  if (depth <= 0)
    throw std::runtime_error("gauss_quadrature: tolerance not met");
  return gauss_recurse(f, a, m, left, tol, depth - 1) +
         gauss_recurse(f, m, b, right, tol, depth - 1);
}

}  // namespace

double quadrature(const std::function<double(double)>& f, double a, double b,
                  double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_recurse(f, a, b, fa, fm, fb, whole, tol, 48);
}

double gauss_quadrature(const std::function<double(double)>& f, double a,
                        double b, double tol) {
  return gauss_recurse(f, a, b, gauss_panel(f, a, b), tol, 40);
}

}  // namespace shadow::oracle

#include "shadow/elliptic.hpp"

#include <cmath>
#include <numbers>

namespace shadow {

namespace {

constexpr int kMaxAgmIterations = 40;

// Landen descent stops once the squared modulus is below this; the remaining
// correction to the circular base case is under one ulp.
constexpr double kLandenCutoff = 1e-16;

}  // namespace

double Modulus::k() const { return std::sqrt(1.0 - m1_); }

// AGM on (1, k') = (1, sqrt(m1)).  K = pi / (2 * agm).  Quadratic convergence;
// the iteration is stopped at |a - b| <= 4 ulp(a).
double ellip_K(const Modulus& m) {
  double a = 1.0;
  double b = std::sqrt(m.m1());
  for (int i = 0; i < kMaxAgmIterations; ++i) {
    if (a - b <= 4.0 * (std::nextafter(a, 2.0 * a) - a)) break;
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return std::numbers::pi / (2.0 * a);
}

// Same AGM with the accumulated sum of squared differences:
//   E = K * (1 - sum_{n>=0} 2^{n-1} c_n^2),  c_0 = k, c_n = (a_{n-1}-b_{n-1})/2.
double ellip_E(const Modulus& m) {
  double a = 1.0;
  double b = std::sqrt(m.m1());
  double sum = 0.5 * m.k2();  // 2^{-1} c_0^2
  double pow2 = 1.0;
  for (int i = 0; i < kMaxAgmIterations; ++i) {
    if (a - b <= 4.0 * (std::nextafter(a, 2.0 * a) - a)) break;
    const double c = 0.5 * (a - b);
    sum += pow2 * c * c;
    pow2 *= 2.0;
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return std::numbers::pi / (2.0 * a) * (1.0 - sum);
}

namespace {

// Gauss/Landen descent on the squared modulus.  Each level maps k to
// k1 = (1 - k')/(1 + k') and the argument to x/(1 + k1); at the bottom the
// functions are circular.  Ascent uses
//   sn = (1+k1) s / (1 + k1 s^2),
//   cn = c d / (1 + k1 s^2),
//   dn = (1 - k1 s^2) / (1 + k1 s^2),
// with s, c, d the values at the smaller modulus.
JacobiValues jacobi_core(double x, double k2, double m1) {
  if (k2 < kLandenCutoff) {
    const double s = std::sin(x);
    const double c = std::cos(x);
    // First-order small-modulus correction (negligible below the cutoff but
    // keeps the error flat right at it).
    const double a = 0.25 * k2 * (x - s * c);
    return {s - a * c, c + a * s, 1.0 - 0.5 * k2 * s * s};
  }
  const double kp = std::sqrt(m1);
  const double k1 = (1.0 - kp) / (1.0 + kp);
  const double k1sq = k1 * k1;
  const double m1_next = (1.0 - k1) * (1.0 + k1);
  const JacobiValues v = jacobi_core(x / (1.0 + k1), k1sq, m1_next);
  const double denom = 1.0 + k1 * v.sn * v.sn;
  return {(1.0 + k1) * v.sn / denom, v.cn * v.dn / denom,
          (1.0 - k1 * v.sn * v.sn) / denom};
}

}  // namespace

JacobiValues jacobi_scd(double x, const Modulus& m) {
  const double K = ellip_K(m);
  // Reduce to [0, 4K), then fold to [0, K] tracking the sign flips:
  //   sn(x + 2K) = -sn(x), cn(x + 2K) = -cn(x), dn(x + 2K) = dn(x),
  //   sn(2K - x) =  sn(x), cn(2K - x) = -cn(x), dn(2K - x) = dn(x),
  // and sn odd, cn/dn even.
  double y = std::fmod(x, 4.0 * K);
  if (y < 0.0) y += 4.0 * K;
  double sn_sign = 1.0;
  double cn_sign = 1.0;
  if (y >= 2.0 * K) {
    y -= 2.0 * K;
    sn_sign = -sn_sign;
    cn_sign = -cn_sign;
  }
  if (y > K) {
    y = 2.0 * K - y;
    cn_sign = -cn_sign;
  }
  JacobiValues v = jacobi_core(y, m.k2(), m.m1());
  v.sn *= sn_sign;
  v.cn *= cn_sign;
  return v;
}

double jacobi_sn(double x, const Modulus& m) { return jacobi_scd(x, m).sn; }
double jacobi_cn(double x, const Modulus& m) { return jacobi_scd(x, m).cn; }
double jacobi_dn(double x, const Modulus& m) { return jacobi_scd(x, m).dn; }

}  // namespace shadow

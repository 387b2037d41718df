// Complete elliptic integrals K(k), E(k) and Jacobi elliptic functions
// sn/cn/dn, built for the sharp-layer regime k -> 1.  The modulus is stored
// through the complementary parameter m1 = 1 - k^2, which stays representable
// long after k itself has rounded to 1.

#pragma once

#include <stdexcept>

namespace shadow {

// Elliptic modulus k in [0,1), held as m1 = 1 - k^2 with 0 < m1 <= 1.
class Modulus {
 public:
  static Modulus from_m1(double m1) {
    if (!(m1 > 0.0) || m1 > 1.0)
      throw std::domain_error("Modulus: m1 must satisfy 0 < m1 <= 1");
    return Modulus(m1);
  }
  static Modulus from_k(double k) {
    if (!(k >= 0.0) || k >= 1.0)
      throw std::domain_error("Modulus: k must satisfy 0 <= k < 1");
    return Modulus((1.0 - k) * (1.0 + k));
  }

  double m1() const { return m1_; }
  double k2() const { return 1.0 - m1_; }
  double k() const;

 private:
  explicit Modulus(double m1) : m1_(m1) {}
  double m1_;
};

// Complete elliptic integral of the first kind, K(k).
double ellip_K(const Modulus& m);

// Complete elliptic integral of the second kind, E(k).
double ellip_E(const Modulus& m);

struct JacobiValues {
  double sn;
  double cn;
  double dn;
};

// sn, cn, dn at argument x; valid for any finite x (range-reduced mod 4K).
JacobiValues jacobi_scd(double x, const Modulus& m);

double jacobi_sn(double x, const Modulus& m);
double jacobi_cn(double x, const Modulus& m);
double jacobi_dn(double x, const Modulus& m);

}  // namespace shadow

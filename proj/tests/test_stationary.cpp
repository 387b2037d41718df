#include <doctest.h>

#include <cmath>
#include <numbers>

#include "shadow/elliptic.hpp"
#include "shadow/oracle.hpp"
#include "shadow/stationary.hpp"

using namespace shadow;

namespace {

// Composite Simpson on a fixed number of intervals (even), used as the
// independent route for the mass integral.
double composite_simpson(const std::function<double(double)>& f, double a,
                         double b, int intervals) {
  const double h = (b - a) / intervals;
  double s = f(a) + f(b);
  for (int i = 1; i < intervals; ++i)
    s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace

TEST_SUITE_BEGIN("stationary");

TEST_CASE("params validation aggregates every violation") {
  Params good{0.2, 6.0, 0.5, 0.5, 0.5};
  CHECK_NOTHROW(good.validate());
  Params bad{-0.2, 0.0, 0.5, -1.0, 0.5};
  try {
    bad.validate();
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("eps") != std::string::npos);
    CHECK(msg.find("tau") != std::string::npos);
    CHECK(msg.find("beta") != std::string::npos);
  }
  CHECK(good.delta() == doctest::Approx(0.5).epsilon(1e-16));
}

TEST_CASE("modulus equation at eps = 0.2, n = 1") {
  const Modulus m = solve_modulus(0.2, 1);
  CHECK(m.k() > 0.78);
  CHECK(m.k() < 0.80);
  const double lhs = std::sqrt(1.0 + m.k2()) * ellip_K(m);
  CHECK(std::abs(lhs - 2.5) < 1e-13 * 2.5);
  // Frozen root.
  CHECK(m.m1() == doctest::Approx(0.38435990966581340).epsilon(1e-14));
}

TEST_CASE("modulus collapses to zero at the solvability edge") {
  const double eps = 0.999 / std::numbers::pi;
  CHECK(solve_modulus(eps, 1).k() < 0.1);
}

TEST_CASE("modulus depends on n*eps only") {
  const Modulus a = solve_modulus(0.2, 1);
  const Modulus b = solve_modulus(0.1, 2);
  CHECK(a.m1() == doctest::Approx(b.m1()).epsilon(1e-14));
  const Modulus c = solve_modulus(0.05, 4);
  CHECK(a.m1() == doctest::Approx(c.m1()).epsilon(1e-14));
}

TEST_CASE("modulus equation domain errors") {
  CHECK_THROWS_AS(solve_modulus(1.0 / std::numbers::pi, 1), std::domain_error);
  CHECK_THROWS_AS(solve_modulus(0.4, 1), std::domain_error);
  CHECK_THROWS_AS(solve_modulus(0.0, 1), std::domain_error);
  CHECK_THROWS_AS(solve_modulus(0.2, 0), std::domain_error);
  CHECK_NOTHROW(solve_modulus(0.2, 1));
  CHECK_THROWS_AS(solve_modulus(0.2, 2), std::domain_error);
}

TEST_CASE("profile endpoint values and layer zeros") {
  const StationaryProfile plus = StationaryProfile::build(0.2, 1, +1);
  const StationaryProfile minus = StationaryProfile::build(0.2, 1, -1);
  CHECK(plus(0.0) == doctest::Approx(plus.rho()).epsilon(1e-12));
  CHECK(minus(0.0) == doctest::Approx(-minus.rho()).epsilon(1e-12));
  CHECK(plus.rho() > 0.0);
  CHECK(plus.rho() < 1.0);
  CHECK(plus.rho() * plus.rho() ==
        doctest::Approx(2.0 * plus.modulus().k2() /
                        (1.0 + plus.modulus().k2()))
            .epsilon(1e-15));

  const StationaryProfile two = StationaryProfile::build(0.1, 2, -1);
  REQUIRE(two.layers().size() == 2);
  CHECK(two.layers()[0] == doctest::Approx(0.25).epsilon(1e-16));
  CHECK(two.layers()[1] == doctest::Approx(0.75).epsilon(1e-16));
  for (double layer : two.layers()) CHECK(std::abs(two(layer)) < 1e-10);

  for (int n = 1; n <= 4; ++n) {
    const StationaryProfile p = StationaryProfile::build(0.05, n, -1);
    for (double layer : p.layers()) CHECK(std::abs(p(layer)) < 1e-10);
  }
}

TEST_CASE("profile Neumann boundary slopes vanish") {
  const StationaryProfile p = StationaryProfile::build(0.2, 1, -1);
  const double h = 1e-4;
  CHECK(std::abs((p(h) - p(-h)) / (2.0 * h)) < 1e-6);
  CHECK(std::abs((p(1.0 + h) - p(1.0 - h)) / (2.0 * h)) < 1e-6);
}

TEST_CASE("mass integral against composite Simpson") {
  const StationaryProfile p = StationaryProfile::build(0.2, 1, -1);
  const double quad = composite_simpson(
      [&p](double x) {
        const double u = p(x);
        return u * u;
      },
      0.0, 1.0, 10000);
  CHECK(mass_squared(p) == doctest::Approx(quad).epsilon(1e-8));
  // Frozen reference.
  CHECK(p.mass2() == doctest::Approx(0.42606228674085241).epsilon(1e-13));
}

TEST_CASE("mass integral saturates at sharp layers") {
  // 1 - mass2 behaves like E/K ~ 2 sqrt(2) n eps, so the approach to 1 is
  // logarithmic in m1.  At eps = 0.02 (m1 ~ 7e-15) the verified value is
  // 0.9434; the saturation is monotone in sharpening layers.
  const StationaryProfile coarse = StationaryProfile::build(0.1, 1, -1);
  const StationaryProfile mid = StationaryProfile::build(0.05, 1, -1);
  const StationaryProfile sharp = StationaryProfile::build(0.02, 1, -1);
  CHECK(sharp.modulus().m1() < 1e-12);
  CHECK(sharp.mass2() == doctest::Approx(0.943431457505).epsilon(1e-10));
  CHECK(coarse.mass2() < mid.mass2());
  CHECK(mid.mass2() < sharp.mass2());
  CHECK(sharp.mass2() < 1.0);
  // Deficit tracks the leading-order E/K = 2 sqrt(2) eps.
  CHECK(1.0 - sharp.mass2() ==
        doctest::Approx(2.0 * std::numbers::sqrt2 * 0.02).epsilon(0.05));
}

TEST_CASE("mass integral ignores the branch sign") {
  const StationaryProfile plus = StationaryProfile::build(0.15, 1, +1);
  const StationaryProfile minus = StationaryProfile::build(0.15, 1, -1);
  CHECK(plus.mass2() == minus.mass2());
}

TEST_CASE("stationarity residual under 5-point differences") {
  const double eps = 0.2;
  const StationaryProfile p = StationaryProfile::build(eps, 1, -1);
  const double h = 5e-4;
  double worst = 0.0;
  for (int i = 2; i <= 1998; ++i) {
    const double x = i * 5e-4;
    const double um2 = p(x - 2 * h), um1 = p(x - h), u0 = p(x);
    const double up1 = p(x + h), up2 = p(x + 2 * h);
    const double upp =
        (-um2 + 16 * um1 - 30 * u0 + 16 * up1 - up2) / (12 * h * h);
    worst = std::max(worst,
                     std::abs(eps * eps * upp + u0 - u0 * u0 * u0));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("energy first integral is constant along x") {
  const double eps = 0.2;
  const StationaryProfile p = StationaryProfile::build(eps, 1, -1);
  const double h = 5e-4;
  const double rho = p.rho();
  const double reference = rho * rho / 2.0 - rho * rho * rho * rho / 4.0;
  for (int i = 2; i <= 1998; i += 7) {
    const double x = i * 5e-4;
    const double up =
        (p(x - 2 * h) - 8 * p(x - h) + 8 * p(x + h) - p(x + 2 * h)) /
        (12 * h);
    const double u = p(x);
    const double energy =
        eps * eps * up * up / 2.0 + u * u / 2.0 - u * u * u * u / 4.0;
    CHECK(energy == doctest::Approx(reference).epsilon(1e-8));
  }
}

TEST_CASE("profile symmetry u(x) = (-1)^n u(1-x)") {
  for (int n : {1, 2, 3}) {
    const StationaryProfile p = StationaryProfile::build(0.07, n, -1);
    const double parity = n % 2 ? -1.0 : 1.0;
    for (double x : {0.0, 0.11, 0.3, 0.47, 0.5}) {
      CHECK(std::abs(p(x) - parity * p(1.0 - x)) < 1e-10);
    }
  }
}

TEST_CASE("chi at the reference parameters") {
  const StationaryProfile p = StationaryProfile::build(0.2, 1, -1);
  const double chi1 = chi(p);
  CHECK(chi1 == doctest::Approx(0.098610272720637903).epsilon(1e-13));
  CHECK(chi1 > 0.0);
  CHECK(chi1 < 0.5);  // the Hopf hypothesis at delta = 0.5
}

TEST_CASE("chi depends on n*eps only") {
  const double a = chi(StationaryProfile::build(0.2, 1, -1));
  const double b = chi(StationaryProfile::build(0.1, 2, -1));
  CHECK(a == doctest::Approx(b).epsilon(1e-14));
}

TEST_CASE("chi approaches its asymptotic form") {
  const double eps = 0.04;
  const StationaryProfile p = StationaryProfile::build(eps, 1, -1);
  const double asym = 16.0 * std::numbers::sqrt2 / eps *
                      std::exp(-std::numbers::sqrt2 / eps);
  CHECK(chi(p) / asym == doctest::Approx(1.0).epsilon(0.1));
}

TEST_SUITE_END();

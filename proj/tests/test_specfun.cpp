#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qbreak/errors.hpp"
#include "qbreak/quadrature.hpp"
#include "qbreak/specfun.hpp"

using namespace qbreak;
using namespace qbreak::specfun;

namespace {

// arg Gamma(1/2 + i t) from the product formula of Gamma:
// -gamma t - 2 ln2 t + sum_k [t/(k+1/2) - atan(t/(k+1/2))], with the
// cubic tail of the sum added in closed form.
double arg_gamma_series(double t) {
  const long K = 2000000;
  long double s = 0.0L;
  for (long k = K - 1; k >= 0; --k) {
    const long double x = static_cast<long double>(t) / (k + 0.5L);
    s += x - std::atan(x);
  }
  const long double t3 = static_cast<long double>(t) * t * t;
  // sum_{k>=K} 1/(k+1/2)^3 ~ 1/(2 K^2) and the next term, x^5/5.
  s += t3 / 3.0L / (2.0L * K * K) - t3 * t * t / 5.0L / (4.0L * K * K * K * K);
  return static_cast<double>(-kEulerGamma * t - 2.0L * std::numbers::ln2_v<long double> * t + s);
}

}  // namespace

TEST_SUITE("specfun") {
  TEST_CASE("gamma at exact points") {
    CHECK(gamma_real(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
    CHECK(gamma_real(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(gamma_real(5.0) == doctest::Approx(24.0).epsilon(1e-14));
    CHECK(gamma_real(50.0) == doctest::Approx(6.0828186403426e62).epsilon(1e-12));
    CHECK(log_gamma_real(30.0) == doctest::Approx(std::lgamma(30.0)).epsilon(1e-13));
    CHECK_THROWS_AS(gamma_real(0.0), DomainError);
    CHECK_THROWS_AS(gamma_real(-1.5), DomainError);
  }

  TEST_CASE("gamma(7/4) against the Euler integral") {
    quad::QuadOptions o;
    o.rel_tol = 1e-13;
    o.max_intervals = 20000;
    const auto r = quad::integrate_to_infinity([](double t) { return std::pow(t, 0.75) * std::exp(-t); }, 0.0, o);
    REQUIRE(r.converged);
    CHECK(gamma_real(1.75) == doctest::Approx(r.value).epsilon(1e-12));
    const auto est = gamma_real_estimate(1.75);
    CHECK(est.est_error >= 0.0);
    CHECK(est.est_error <= 1e-12);
  }

  TEST_CASE("arg gamma symmetry and series oracle") {
    CHECK(arg_gamma_half_plus_it(0.0) == 0.0);
    for (double t : {0.3, 2.0, 17.0, 25.0, 1e3, 1e6}) {
      CHECK(arg_gamma_half_plus_it(-t) == -arg_gamma_half_plus_it(t));
    }
    CHECK(arg_gamma_half_plus_it(10.0) == doctest::Approx(arg_gamma_series(10.0)).epsilon(1e-12));
    CHECK(arg_gamma_half_plus_it(1.5) == doctest::Approx(arg_gamma_series(1.5)).epsilon(1e-12));
    // Both sides of the switch to the asymptotic branch.
    CHECK(arg_gamma_half_plus_it(19.999) == doctest::Approx(arg_gamma_series(19.999)).epsilon(1e-12));
    CHECK(arg_gamma_half_plus_it(20.001) == doctest::Approx(arg_gamma_series(20.001)).epsilon(1e-12));
  }

  TEST_CASE("arg gamma has a single turning point on t > 0") {
    // d/dt arg Gamma(1/2 + it) = Re psi(1/2 + it), negative until t ~ 0.8 and
    // positive after; checked numerically on a grid.
    double prev = arg_gamma_half_plus_it(0.0);
    int sign_changes = 0;
    double prev_diff = 0.0;
    for (int i = 1; i <= 4000; ++i) {
      const double t = i * 0.005;
      const double v = arg_gamma_half_plus_it(t);
      const double diff = v - prev;
      if (i > 1 && (diff > 0) != (prev_diff > 0)) ++sign_changes;
      prev_diff = diff;
      prev = v;
    }
    CHECK(sign_changes == 1);
  }

  TEST_CASE("K0 small-argument structure") {
    for (double x : {1e-6, 1e-5, 1e-4}) {
      CHECK(std::abs(bessel_k0(x) + std::log(x / 2) + kEulerGamma) < 1e-7);
    }
    CHECK_THROWS_AS(bessel_k0(0.0), DomainError);
    CHECK(bessel_k0(800.0) == 0.0);
  }

  TEST_CASE("K0 against its integral representation") {
    for (double x : {0.1, 1.0, 2.0, 2.5, 10.0, 50.0}) {
      quad::QuadOptions o;
      o.rel_tol = 1e-13;
      const auto r = quad::integrate_to_infinity([x](double u) { return std::exp(-x * std::cosh(u)); }, 0.0, o);
      CHECK(bessel_k0(x) == doctest::Approx(r.value).epsilon(1e-11));
    }
  }

  TEST_CASE("integral of K0 is pi/2") {
    quad::QuadOptions o;
    o.rel_tol = 1e-12;
    o.max_intervals = 20000;
    const auto near = quad::integrate([](double x) { return bessel_k0(x); }, 0.0, 1.0, o);
    const auto far = quad::integrate_to_infinity([](double x) { return bessel_k0(x); }, 1.0, o);
    CHECK(std::abs(near.value + far.value - std::numbers::pi / 2) < 1e-8);
  }

  TEST_CASE("K0 is positive, decreasing and convex") {
    double p2 = bessel_k0(0.01), p1 = bessel_k0(0.02);
    for (int i = 3; i < 3000; ++i) {
      const double v = bessel_k0(0.01 * i);
      CHECK(v > 0.0);
      CHECK(v < p1);
      CHECK(v - 2 * p1 + p2 > -1e-15);
      p2 = p1;
      p1 = v;
    }
  }

  TEST_CASE("results are reproducible") {
    CHECK(bessel_k0(3.3) == bessel_k0(3.3));
    CHECK(arg_gamma_half_plus_it(7.1) == arg_gamma_half_plus_it(7.1));
  }
}

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "qbreak/errors.hpp"
#include "qbreak/model.hpp"
#include "qbreak/semiclassics.hpp"

using namespace qbreak;

namespace {

// Composite trapezoid on sqrt(2(eps - V)) after q = qt sin(theta), which
// removes the square-root endpoint behaviour.
double trapezoid_area(const PotentialSpec& spec, double eps, double qt, int panels) {
  const double a = -std::numbers::pi / 2, b = std::numbers::pi / 2;
  const double h = (b - a) / panels;
  double s = 0.0;
  for (int i = 0; i <= panels; ++i) {
    const double th = a + i * h;
    const double q = qt * std::sin(th);
    const double f = std::sqrt(std::max(0.0, 2.0 * (eps - potential_value(spec, q)))) * qt * std::cos(th);
    s += (i == 0 || i == panels) ? 0.5 * f : f;
  }
  return 2.0 * s * h;
}

}  // namespace

TEST_SUITE("model") {
  TEST_CASE("potential values and parity") {
    CHECK(potential_value(PotentialSpec::single_well(2), 0.0) == 0.0);
    CHECK(potential_value(PotentialSpec::double_well(1, 2), 1.0) == doctest::Approx(-0.25).epsilon(1e-15));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    const auto dw = PotentialSpec::double_well(2, 4);
    for (int i = 0; i < 200; ++i) {
      const double q = u(rng);
      CHECK(potential_value(dw, q) == potential_value(dw, -q));
    }
    CHECK(potential_minimum(PotentialSpec::double_well(1, 2)) == doctest::Approx(-0.25));
  }

  TEST_CASE("invalid specs are rejected") {
    CHECK_THROWS_AS(PotentialSpec::double_well(2, 2), ConfigError);
    CHECK_THROWS_AS(PotentialSpec::double_well(0, 2), ConfigError);
    CHECK_THROWS_AS(PotentialSpec::single_well(0), ConfigError);
  }

  TEST_CASE("rescaling factors") {
    const Rescaling id = rescale_physical({1.0, 0.0, 1.0, 1.0}, 1, 2);
    CHECK(id.energy_factor == doctest::Approx(1.0));
    CHECK(id.hbar_factor == doctest::Approx(1.0));
    const Rescaling dw = rescale_physical({1.0, -1.0, 1.0, 1.0}, 1, 2);
    CHECK(dw.energy_factor == doctest::Approx(1.0));
    CHECK(dw.hbar_factor == doctest::Approx(1.0));
    CHECK(dw.spec == PotentialSpec::double_well(1, 2));
    const Rescaling heavy = rescale_physical({4.0, 0.0, 1.0, 1.0}, 1, 2);
    CHECK(heavy.energy_factor == doctest::Approx(1.0 / 16.0));
    CHECK(heavy.hbar_factor == doctest::Approx(1.0 / 16.0));
    CHECK_THROWS_AS(rescale_physical({1.0, 0.5, 1.0, 1.0}, 1, 2), DomainError);
  }

  TEST_CASE("single-well factors follow dimensional analysis") {
    // E_n = e_n * (hbar^(2b) B / m^b)^(1/(b+1)) in physical units and
    // e_n * hbar_r^(2b/(b+1)) in rescaled units; both must agree.
    for (int beta : {2, 3, 5}) {
      for (double m : {0.5, 3.0}) {
        for (double B : {0.2, 4.0}) {
          for (double tau : {1.0, 2.5}) {
            const Rescaling r = rescale_physical({m, 0.0, B, tau}, 1, beta);
            const double b = beta;
            const double lhs = r.energy_factor * std::pow(B, 1.0 / (b + 1)) * std::pow(m, -b / (b + 1));
            CHECK(lhs == doctest::Approx(std::pow(r.hbar_factor, 2 * b / (b + 1))).epsilon(1e-12));
          }
        }
      }
    }
  }

  TEST_CASE("double-well factors map the well bottom and its oscillation quantum") {
    for (auto [alpha, beta] : {std::pair{1, 2}, std::pair{2, 4}, std::pair{1, 3}}) {
      for (double m : {0.7, 2.0}) {
        for (double A : {-0.3, -5.0}) {
          const double B = 1.7;
          const Rescaling r = rescale_physical({m, A, B, 1.0}, alpha, beta);
          const double qs = std::pow(-A / B, 1.0 / (2.0 * (beta - alpha)));
          const double vmin = A * std::pow(qs, 2 * alpha) / (2 * alpha) + B * std::pow(qs, 2 * beta) / (2 * beta);
          CHECK(r.energy_factor * vmin == doctest::Approx(potential_minimum(r.spec)).epsilon(1e-12));
          const double curv = A * (2 * alpha - 1) * std::pow(qs, 2 * alpha - 2) +
                              B * (2 * beta - 1) * std::pow(qs, 2 * beta - 2);
          const double omega = std::sqrt(curv / m);
          const double omega_r = std::sqrt(static_cast<double>(2 * beta - 2 * alpha));
          CHECK(r.energy_factor * omega == doctest::Approx(r.hbar_factor * omega_r).epsilon(1e-12));
        }
      }
    }
  }

  TEST_CASE("turning points") {
    const auto sw = turning_points(PotentialSpec::single_well(2), 0.25);
    REQUIRE(sw.size() == 2);
    CHECK(sw[0] == doctest::Approx(-1.0));
    CHECK(sw[1] == doctest::Approx(1.0));

    const auto dw = PotentialSpec::double_well(1, 2);
    const auto zero = turning_points(dw, 0.0);
    REQUIRE(zero.size() == 4);
    CHECK(zero[0] == doctest::Approx(-std::sqrt(2.0)));
    CHECK(zero[1] == 0.0);
    CHECK(zero[2] == 0.0);
    CHECK(zero[3] == doctest::Approx(std::sqrt(2.0)));

    const auto below = turning_points(dw, -0.125);
    REQUIRE(below.size() == 4);
    for (double q : below) CHECK(potential_value(dw, q) == doctest::Approx(-0.125).epsilon(1e-13));
    CHECK(below[3] * below[3] == doctest::Approx(1.0 + std::sqrt(0.5)));
    CHECK(below[2] * below[2] == doctest::Approx(1.0 - std::sqrt(0.5)));

    // Bisection path (beta != 2 alpha).
    const auto odd = PotentialSpec::double_well(2, 3);
    for (double q : turning_points(odd, -0.02)) CHECK(potential_value(odd, q) == doctest::Approx(-0.02).epsilon(1e-12));

    CHECK_THROWS_AS(turning_points(dw, -0.3), EmptyRangeError);
    CHECK(turning_points(dw, 0.5).size() == 2);
  }

  TEST_CASE("action area against a trapezoid oracle") {
    const auto sw = PotentialSpec::single_well(2);
    const double qt = std::sqrt(2.0);
    const double oracle = trapezoid_area(sw, 1.0, qt, 20000);
    CHECK(action_area(sw, 1.0) == doctest::Approx(oracle).epsilon(1e-10));
    CHECK(action_area(sw, 1e-12) < 1e-8);

    const auto dw = PotentialSpec::double_well(1, 2);
    double prev = -1.0;
    for (int i = 0; i < 100; ++i) {
      const double eps = -0.2499 + i * 0.006;
      const double a = action_area(dw, eps);
      CHECK(a > prev);
      prev = a;
    }
  }

  TEST_CASE("area derivative matches the period sum") {
    const auto dw = PotentialSpec::double_well(1, 2);
    for (double eps : {-0.2, -0.05, 0.05, 0.3}) {
      const double d = 1e-5;
      const double fd = (action_area(dw, eps + d) - action_area(dw, eps - d)) / (2 * d);
      CHECK(action_area_derivative(dw, eps) == doctest::Approx(fd).epsilon(1e-6));
    }
  }

  TEST_CASE("classical period") {
    const auto h = PotentialSpec::harmonic();
    for (double eps : {0.01, 0.5, 3.0}) CHECK(classical_period(h, eps) == doctest::Approx(2 * std::numbers::pi).epsilon(1e-10));

    const auto sw = PotentialSpec::single_well(2);
    for (double eps : {1e-3, 0.1, 2.0}) {
      CHECK(classical_period(sw, 16 * eps) == doctest::Approx(classical_period(sw, eps) / 2).epsilon(1e-9));
    }
    // T * eps^((beta-1)/(2 beta)) is constant over two decades.
    const double c0 = classical_period(sw, 0.01) * std::pow(0.01, 0.25);
    CHECK(classical_period(sw, 1.0) * std::pow(1.0, 0.25) == doctest::Approx(c0).epsilon(1e-9));

    const auto dw = PotentialSpec::double_well(1, 2);
    CHECK_THROWS_AS(classical_period(dw, 0.0), DivergentPeriodError);
    // Logarithmic divergence: equal increments per decade of |eps|.
    std::vector<double> t;
    for (int k = 2; k <= 6; ++k) t.push_back(classical_period(dw, -std::pow(10.0, -k)));
    for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i] > t[i - 1]);
    const double step = t[4] - t[3];
    CHECK(step == doctest::Approx(std::log(10.0)).epsilon(1e-3));
    CHECK(t[3] - t[2] == doctest::Approx(step).epsilon(1e-3));
  }

  TEST_CASE("Weyl count") {
    const auto sw = PotentialSpec::single_well(2);
    CHECK(weyl_count(sw, 0.0, 1e-3) > weyl_count(sw, 0.0, 1e-2));
    // Away from the bottom the count agrees with the WKB level density.
    const double hbar = 1e-3;
    const double dens = semiclassics::wkb_level_density(2, hbar, 1.0);
    CHECK(weyl_count(sw, 1.0, hbar) == doctest::Approx(2 * hbar * dens).epsilon(1e-2));

    const auto dw = PotentialSpec::double_well(1, 2);
    CHECK(weyl_count(dw, 0.0, 1e-4) > weyl_count(dw, 0.0, 1e-3));
    const double a = weyl_count(dw, 1.0, 1e-4);
    const double b = weyl_count(dw, 1.0, 1e-5);
    CHECK(a == doctest::Approx(b).epsilon(1e-6));
  }
}

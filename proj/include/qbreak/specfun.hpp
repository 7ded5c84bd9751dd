#pragma once

namespace qbreak::specfun {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

struct SpecFunResult {
  double value = 0.0;
  double est_error = 0.0;  // absolute
};

// Gamma(x) for x > 0 (Lanczos, g = 7, nine coefficients). Relative accuracy
// is about 1e-15 on (0, 50].
SpecFunResult gamma_real_estimate(double x);
double gamma_real(double x);
double log_gamma_real(double x);

// arg Gamma(1/2 + i t) on the continuous branch through arg Gamma(1/2) = 0.
SpecFunResult arg_gamma_half_plus_it_estimate(double t);
double arg_gamma_half_plus_it(double t);

// Modified Bessel function K_0(x), x > 0. Returns 0 once exp(-x) underflows.
SpecFunResult bessel_k0_estimate(double x);
double bessel_k0(double x);

}  // namespace qbreak::specfun

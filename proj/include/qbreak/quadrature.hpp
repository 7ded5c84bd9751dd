#pragma once

#include <functional>

namespace qbreak::quad {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // absolute error estimate
  int intervals = 0;
  bool converged = false;
};

struct QuadOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-300;
  int max_intervals = 4000;
};

using Integrand = std::function<double(double)>;

// Globally adaptive 7/15-point Gauss-Kronrod on a finite interval.
QuadResult integrate(const Integrand& f, double a, double b, const QuadOptions& opts = {});

// Same as integrate(), but throws AccuracyError if the tolerance is missed.
double integrate_or_throw(const Integrand& f, double a, double b, const QuadOptions& opts = {});

// Integrates over [a, inf) through the map x = a + t/(1-t).
QuadResult integrate_to_infinity(const Integrand& f, double a, const QuadOptions& opts = {});

// Integral over [a, b] of an integrand with (at most) inverse-square-root
// singularities at both ends. The interval is split at its midpoint and each
// half is mapped with x = end +/- u^2, which turns the singular factor into a
// smooth one. `f` is evaluated at the original abscissa; the Jacobian is
// applied internally.
QuadResult integrate_sqrt_endpoints(const Integrand& f, double a, double b,
                                    const QuadOptions& opts = {});

}  // namespace qbreak::quad

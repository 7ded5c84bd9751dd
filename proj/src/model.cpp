#include "qbreak/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qbreak/errors.hpp"
#include "qbreak/quadrature.hpp"

namespace qbreak {
namespace {

constexpr double kQuadTol = 1e-10;

double ipow(double x, int n) {
  double r = 1.0;
  while (n > 0) {
    if (n & 1) r *= x;
    x *= x;
    n >>= 1;
  }
  return r;
}

// V as a function of x = q^2 (double-well part only).
double reduced_double(int alpha, int beta, double x) {
  return ipow(x, beta) / (2.0 * beta) - ipow(x, alpha) / (2.0 * alpha);
}

// Bisection on a monotone branch of the reduced potential.
double bisect_branch(int alpha, int beta, double eps, double lo, double hi, bool increasing) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f = reduced_double(alpha, beta, mid) - eps;
    const bool above = increasing ? (f > 0.0) : (f < 0.0);
    if (above) {
      hi = mid;
    } else {
      lo = mid;
    }
    if (hi - lo <= 1e-14 * std::max(1e-300, std::abs(mid)) ) break;
  }
  return 0.5 * (lo + hi);
}

// Positive roots x = q^2 of the double-well equation (inner root < 1 only for eps < 0).
struct ReducedRoots {
  double inner = -1.0;  // < 0 when absent
  double outer = 0.0;
};

ReducedRoots double_well_roots(int alpha, int beta, double eps) {
  ReducedRoots r;
  if (beta == 2 * alpha) {
    // y = x^alpha solves y^2 - 2y - 4 alpha eps = 0.
    const double disc = std::sqrt(std::max(0.0, 1.0 + 4.0 * alpha * eps));
    r.outer = std::pow(1.0 + disc, 1.0 / alpha);
    if (eps < 0.0) {
      const double y_in = -4.0 * alpha * eps / (1.0 + disc);
      r.inner = std::pow(y_in, 1.0 / alpha);
    } else if (eps == 0.0) {
      r.inner = 0.0;
    }
    return r;
  }
  double hi = 2.0;
  while (reduced_double(alpha, beta, hi) < eps) hi *= 2.0;
  r.outer = bisect_branch(alpha, beta, eps, 1.0, hi, true);
  if (eps < 0.0) {
    r.inner = bisect_branch(alpha, beta, eps, 0.0, 1.0, false);
  } else if (eps == 0.0) {
    r.inner = 0.0;
  }
  return r;
}

void require_above_minimum(const PotentialSpec& spec, double eps) {
  const double vmin = potential_minimum(spec);
  if (!(eps >= vmin)) {
    std::ostringstream os;
    os << "energy " << eps << " is below the potential minimum " << vmin;
    throw EmptyRangeError(os.str());
  }
}

double momentum(const PotentialSpec& spec, double eps, double q) {
  return std::sqrt(std::max(0.0, 2.0 * (eps - potential_value(spec, q))));
}

quad::QuadOptions quad_options() {
  quad::QuadOptions o;
  o.rel_tol = kQuadTol;
  o.max_intervals = 20000;
  return o;
}

double checked(const quad::QuadResult& r, const char* what) {
  if (!r.converged) {
    throw AccuracyError(std::string(what) + ": quadrature did not converge",
                        r.error / std::max(std::abs(r.value), 1e-300));
  }
  return r.value;
}

// Integral of g over [lo, hi], both ends possibly turning points.
double endpoint_integral(const quad::Integrand& g, double lo, double hi, const char* what) {
  return checked(quad::integrate_sqrt_endpoints(g, lo, hi, quad_options()), what);
}

}  // namespace

std::string to_string(WellKind kind) { return kind == WellKind::Single ? "single" : "double"; }

PotentialSpec PotentialSpec::single_well(int beta) {
  PotentialSpec s{1, beta, WellKind::Single};
  validate(s);
  return s;
}

PotentialSpec PotentialSpec::double_well(int alpha, int beta) {
  PotentialSpec s{alpha, beta, WellKind::Double};
  validate(s);
  return s;
}

PotentialSpec PotentialSpec::harmonic() { return PotentialSpec{1, 1, WellKind::Single}; }

void validate(const PotentialSpec& spec) {
  if (spec.kind == WellKind::Single) {
    if (spec.beta < 1) throw ConfigError("single well requires beta >= 1");
    return;
  }
  if (spec.alpha < 1 || spec.beta <= spec.alpha) {
    throw ConfigError("double well requires beta > alpha >= 1");
  }
}

std::string describe(const PotentialSpec& spec) {
  std::ostringstream os;
  if (spec.kind == WellKind::Single) {
    os << "single(beta=" << spec.beta << ")";
  } else {
    os << "double(alpha=" << spec.alpha << ", beta=" << spec.beta << ")";
  }
  return os.str();
}

Rescaling rescale_physical(const PhysicalParams& p, int alpha, int beta) {
  if (!(p.mass > 0.0) || !(p.b_coeff > 0.0) || !(p.tau > 0.0)) {
    throw DomainError("mass, B and tau must be positive");
  }
  if (p.a_coeff > 0.0) throw DomainError("A > 0 is outside the single/double well family");
  Rescaling r;
  const double b = beta;
  if (p.a_coeff == 0.0) {
    if (beta < 2) throw DomainError("single-well rescaling requires beta >= 2");
    r.spec = PotentialSpec::single_well(beta);
    const double common = std::pow(p.mass, -b / (b - 1.0)) * std::pow(p.b_coeff, 1.0 / (b - 1.0));
    r.energy_factor = common * std::pow(p.tau, 2.0 * b / (b - 1.0));
    r.hbar_factor = common * std::pow(p.tau, (b + 1.0) / (b - 1.0));
    return r;
  }
  r.spec = PotentialSpec::double_well(alpha, beta);
  const double a = alpha;
  const double minus_a = -p.a_coeff;
  r.energy_factor = std::pow(minus_a, -b / (b - a)) * std::pow(p.b_coeff, a / (b - a));
  r.hbar_factor = std::pow(p.mass, -0.5) * std::pow(minus_a, -(b + 1.0) / (2.0 * (b - a))) *
                  std::pow(p.b_coeff, (a + 1.0) / (2.0 * (b - a)));
  return r;
}

double potential_value(const PotentialSpec& spec, double q) {
  const double x = q * q;
  const double confining = ipow(x, spec.beta) / (2.0 * spec.beta);
  if (spec.kind == WellKind::Single) return confining;
  return confining - ipow(x, spec.alpha) / (2.0 * spec.alpha);
}

double potential_derivative(const PotentialSpec& spec, double q) {
  const double x = q * q;
  const double confining = ipow(x, spec.beta - 1) * q;
  if (spec.kind == WellKind::Single) return confining;
  return confining - ipow(x, spec.alpha - 1) * q;
}

double potential_minimum(const PotentialSpec& spec) {
  if (spec.kind == WellKind::Single) return 0.0;
  return 1.0 / (2.0 * spec.beta) - 1.0 / (2.0 * spec.alpha);
}

std::vector<double> turning_points(const PotentialSpec& spec, double eps) {
  require_above_minimum(spec, eps);
  if (spec.kind == WellKind::Single) {
    const double q = std::pow(2.0 * spec.beta * eps, 1.0 / (2.0 * spec.beta));
    return {-q, q};
  }
  const ReducedRoots r = double_well_roots(spec.alpha, spec.beta, eps);
  const double outer = std::sqrt(r.outer);
  if (r.inner < 0.0) return {-outer, outer};
  const double inner = std::sqrt(r.inner);
  return {-outer, -inner, inner, outer};
}

double outer_turning_point(const PotentialSpec& spec, double eps) {
  return turning_points(spec, eps).back();
}

namespace {

// Energies this close to a double-well bottom lose all digits in eps - V(q);
// the lobes are harmonic there with frequency sqrt(2 beta - 2 alpha).
bool near_double_bottom(const PotentialSpec& spec, double eps) {
  return spec.kind == WellKind::Double && eps - potential_minimum(spec) < 1e-8;
}

double bottom_frequency(const PotentialSpec& spec) { return std::sqrt(2.0 * (spec.beta - spec.alpha)); }

}  // namespace

double action_area(const PotentialSpec& spec, double eps) {
  require_above_minimum(spec, eps);
  if (eps == potential_minimum(spec)) return 0.0;
  if (near_double_bottom(spec, eps)) {
    return 2.0 * 2.0 * std::numbers::pi * (eps - potential_minimum(spec)) / bottom_frequency(spec);
  }
  const auto tp = turning_points(spec, eps);
  auto p = [&](double q) { return momentum(spec, eps, q); };
  if (tp.size() == 4) {
    // Two mirror-image lobes, each enclosing 2 * integral of p.
    return 4.0 * endpoint_integral(p, tp[2], tp[3], "action_area");
  }
  return 4.0 * endpoint_integral(p, 0.0, tp[1], "action_area");
}

double action_area_derivative(const PotentialSpec& spec, double eps) {
  if (spec.kind == WellKind::Double && eps < 0.0) return 2.0 * classical_period(spec, eps);
  return classical_period(spec, eps);
}

double weyl_count(const PotentialSpec& spec, double eps, double hbar) {
  if (!(hbar > 0.0)) throw DomainError("hbar must be positive");
  const double vmin = potential_minimum(spec);
  const double lower = std::max(eps - hbar, vmin);
  const double upper = eps + hbar;
  if (upper <= vmin) return 0.0;
  return (action_area(spec, upper) - action_area(spec, lower)) / (2.0 * std::numbers::pi * hbar);
}

double classical_period(const PotentialSpec& spec, double eps) {
  const double vmin = potential_minimum(spec);
  if (!(eps > vmin)) throw EmptyRangeError("classical period requires eps above the potential minimum");
  if (spec.kind == WellKind::Double && eps == 0.0) {
    throw DivergentPeriodError("the period diverges on the separatrix eps = 0");
  }
  if (near_double_bottom(spec, eps)) return 2.0 * std::numbers::pi / bottom_frequency(spec);
  const auto tp = turning_points(spec, eps);
  auto inv_p = [&](double q) {
    const double p = momentum(spec, eps, q);
    return p > 0.0 ? 1.0 / p : 0.0;
  };
  if (tp.size() == 4) return 2.0 * endpoint_integral(inv_p, tp[2], tp[3], "classical_period");
  return 4.0 * endpoint_integral(inv_p, 0.0, tp[1], "classical_period");
}

}  // namespace qbreak

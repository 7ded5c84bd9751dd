#include "qbreak/semiclassics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qbreak/errors.hpp"
#include "qbreak/specfun.hpp"

namespace qbreak {

std::string to_string(EhrenfestMethod m) {
  switch (m) {
    case EhrenfestMethod::Numeric:
      return "numeric";
    case EhrenfestMethod::WkbSingleWell:
      return "wkb";
    case EhrenfestMethod::RegWkb:
      return "regwkb";
  }
  return "unknown";
}

EhrenfestMethod parse_method(const std::string& text) {
  if (text == "numeric") return EhrenfestMethod::Numeric;
  if (text == "wkb") return EhrenfestMethod::WkbSingleWell;
  if (text == "regwkb") return EhrenfestMethod::RegWkb;
  throw ConfigError("unknown method '" + text + "' (expected numeric, wkb or regwkb)");
}

double transition_frequency(double eps_lo, double eps_hi, double hbar) {
  return (eps_hi - eps_lo) / (2.0 * std::numbers::pi * hbar);
}

}  // namespace qbreak

namespace qbreak::semiclassics {
namespace {

constexpr long double kTwoPiL = 6.283185307179586476925286766559005768L;
constexpr long double kPiL = 3.141592653589793238462643383279502884L;

void require_positive(double hbar) {
  if (!(hbar > 0.0)) throw DomainError("hbar must be positive");
}

void require_beta(int beta) {
  if (beta < 1) throw DomainError("beta must be >= 1");
}

// arctan(exp(pi eps / hbar)): the half-width of the root pair on one branch,
// since cos(a) = 1 / sqrt(1 + exp(2 pi eps / hbar)).
long double branch_offset(double eps, double hbar) {
  return std::atan(std::exp(static_cast<long double>(std::numbers::pi) * eps / hbar));
}

long double branch_function(double eps, double hbar, BranchMember member) {
  const long double phi = regwkb_phase(eps, hbar);
  const long double a = branch_offset(eps, hbar);
  return member == BranchMember::Lower ? phi + a : phi - a;
}

}  // namespace

double wkb_delta(int beta) {
  require_beta(beta);
  if (beta == 1) return 1.0;  // harmonic: exact, avoids Gamma round-off
  const double b = beta;
  const double num = specfun::gamma_real(0.5 * (3.0 + 1.0 / b));
  const double den = specfun::gamma_real(1.0 + 1.0 / (2.0 * b)) * std::pow(2.0 * b, 1.0 / (2.0 * b));
  return std::sqrt(std::numbers::pi / 2.0) * num / den;
}

double wkb_energy(int beta, double hbar, int n) {
  require_beta(beta);
  require_positive(hbar);
  if (n < 0) throw DomainError("quantum number must be non-negative");
  const double b = beta;
  return std::pow((n + 0.5) * hbar * wkb_delta(beta), 2.0 * b / (b + 1.0));
}

double wkb_level_index(int beta, double hbar, double eps) {
  require_beta(beta);
  require_positive(hbar);
  if (eps < 0.0) throw DomainError("single-well energies are non-negative");
  const double b = beta;
  return std::pow(eps, (b + 1.0) / (2.0 * b)) / (hbar * wkb_delta(beta)) - 0.5;
}

double wkb_level_density(int beta, double hbar, double eps) {
  require_beta(beta);
  require_positive(hbar);
  if (!(eps > 0.0)) throw DomainError("level density needs eps > 0");
  const double b = beta;
  return (b + 1.0) / (2.0 * b) * std::pow(eps, (1.0 - b) / (2.0 * b)) / (hbar * wkb_delta(beta));
}

double wkb_sigma(int beta, double hbar, double eps) {
  require_beta(beta);
  require_positive(hbar);
  const double b = beta;
  return 2.0 * std::numbers::sqrt2 * std::pow(2.0 * b, 1.0 / (2.0 * b)) / hbar *
         std::pow(eps, (b + 1.0) / (2.0 * b));
}

double wkb_weight(int beta, double hbar, double eps) {
  require_beta(beta);
  require_positive(hbar);
  if (!(eps > 0.0)) throw DomainError("wkb_weight requires eps > 0");
  const double b = beta;
  const double numerator = 2.0 * std::sqrt(std::numbers::pi) * std::pow(2.0 * b, -1.0 / (2.0 * b)) *
                           std::sqrt(hbar) * std::pow(eps, -1.0 / (2.0 * b)) * std::exp(-2.0 * eps / hbar);
  const double sigma = wkb_sigma(beta, hbar, eps);
  // Normalized so that the weights of the even ladder sum to one as hbar -> 0.
  const double ratio = specfun::gamma_real(0.5) * specfun::gamma_real(1.0 + 1.0 / (2.0 * b)) /
                       specfun::gamma_real((1.0 + b) / (2.0 * b));
  return numerator / (ratio + std::sin(sigma) / sigma);
}

std::vector<WkbLevel> wkb_levels(int beta, double hbar, int count) {
  std::vector<WkbLevel> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int n = 0; n < count; ++n) {
    WkbLevel lvl;
    lvl.n = n;
    lvl.energy = wkb_energy(beta, hbar, n);
    lvl.weight = (n % 2 == 0) ? wkb_weight(beta, hbar, lvl.energy) : 0.0;
    out.push_back(lvl);
  }
  return out;
}

double limit_distribution(double nu) {
  if (nu == 0.0) throw DomainError("limit distribution diverges logarithmically at nu = 0");
  return 4.0 * specfun::bessel_k0(4.0 * std::numbers::pi * std::abs(nu));
}

EhrenfestPoint single_well_ehrenfest(int beta, double hbar) {
  EhrenfestPoint p;
  p.hbar = hbar;
  p.method = EhrenfestMethod::WkbSingleWell;
  p.eps_lo = wkb_energy(beta, hbar, 0);
  p.eps_hi = wkb_energy(beta, hbar, 2);
  p.n_lo = 0;
  p.n_hi = 2;
  p.nu_e = transition_frequency(p.eps_lo, p.eps_hi, hbar);
  return p;
}

long double regwkb_phase(double eps, double hbar) {
  require_positive(hbar);
  const long double h = hbar;
  const long double t = static_cast<long double>(eps) / h;
  const long double arg_gamma = specfun::arg_gamma_half_plus_it(eps / hbar);
  return 4.0L / (3.0L * h) - t * std::log(h / 16.0L) - arg_gamma - kPiL;
}

double regwkb_residual(double eps, double hbar) {
  const long double phi = regwkb_phase(eps, hbar);
  const double reduced = static_cast<double>(std::fmod(phi, kTwoPiL));
  const double lhs = 1.0 / std::sqrt(1.0 + std::exp(2.0 * std::numbers::pi * eps / hbar));
  return lhs - std::cos(reduced);
}

RegWkbRoots regwkb_roots(double hbar, double eps_min, double eps_max) {
  require_positive(hbar);
  if (!(eps_min < eps_max)) throw DomainError("empty energy window");
  RegWkbRoots out;
  out.hbar = hbar;
  if (std::max(std::abs(eps_min), std::abs(eps_max)) > kRegWkbValidity) {
    std::ostringstream os;
    os << "window [" << eps_min << ", " << eps_max << "] extends beyond |eps| <= " << kRegWkbValidity
       << " where the regularized quantization is reliable";
    out.warning = os.str();
  }

  const double step = hbar / 20.0;
  const auto points = static_cast<std::size_t>(std::ceil((eps_max - eps_min) / step)) + 1;
  auto grid_at = [&](std::size_t i) {
    return i + 1 == points ? eps_max : eps_min + static_cast<double>(i) * step;
  };

  for (BranchMember member : {BranchMember::Lower, BranchMember::Upper}) {
    double e_prev = grid_at(0);
    long double f_prev = branch_function(e_prev, hbar, member);
    auto k_prev = static_cast<long long>(std::floor(f_prev / kTwoPiL));
    for (std::size_t i = 1; i < points; ++i) {
      const double e_cur = grid_at(i);
      const long double f_cur = branch_function(e_cur, hbar, member);
      const auto k_cur = static_cast<long long>(std::floor(f_cur / kTwoPiL));
      for (long long k = k_prev + 1; k <= k_cur; ++k) {
        // The branch functions increase with eps: bisect F(eps) = 2 pi k.
        const long double target = kTwoPiL * static_cast<long double>(k);
        double lo = e_prev, hi = e_cur;
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (mid <= lo || mid >= hi) break;
          if (branch_function(mid, hbar, member) < target) {
            lo = mid;
          } else {
            hi = mid;
          }
        }
        const double flo = std::abs(regwkb_residual(lo, hbar));
        const double fhi = std::abs(regwkb_residual(hi, hbar));
        RegWkbRoot r;
        r.energy = flo <= fhi ? lo : hi;
        r.branch_index = k;
        r.member = member;
        r.phase_at_root = static_cast<double>(regwkb_phase(r.energy, hbar));
        out.roots.push_back(r);
      }
      e_prev = e_cur;
      f_prev = f_cur;
      k_prev = k_cur;
    }
  }
  std::sort(out.roots.begin(), out.roots.end(), [](const RegWkbRoot& a, const RegWkbRoot& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    return a.member == BranchMember::Lower && b.member == BranchMember::Upper;
  });
  return out;
}

RegWkbParityRule calibrate_regwkb_parity(const SpectralWindow& reference) {
  if (!(reference.spec == PotentialSpec::double_well(1, 2))) {
    throw ConfigError("regularized WKB calibration needs the alpha=1, beta=2 double well");
  }
  bool has_even = false, has_odd = false;
  for (const auto& s : reference.states) (s.parity == Parity::Even ? has_even : has_odd) = true;
  if (!has_even || !has_odd) throw ConfigError("calibration window must contain both parities");

  const double lo = std::max(reference.eps_min, -kRegWkbValidity);
  const double hi = std::min(reference.eps_max, kRegWkbValidity);
  const RegWkbRoots roots = regwkb_roots(reference.hbar, lo, hi);
  // Tunnelling doublets can be split by less than the root error, so roots
  // are paired with states by rank. The rank offset is the one that best
  // aligns the two ascending sequences.
  const auto& states = reference.states;
  const auto nr = static_cast<long long>(roots.roots.size());
  const auto ns = static_cast<long long>(states.size());
  long long best_offset = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (long long off = -3; off <= 3; ++off) {
    double cost = 0.0;
    long long pairs = 0;
    for (long long i = 0; i < nr; ++i) {
      if (i + off < 0 || i + off >= ns) continue;
      cost += std::abs(roots.roots[i].energy - states[i + off].energy);
      ++pairs;
    }
    if (pairs >= 4 && cost / pairs < best_cost) {
      best_cost = cost / pairs;
      best_offset = off;
    }
  }
  if (!std::isfinite(best_cost)) throw AccuracyError("too few roots to calibrate the parity rule", 0.0);

  int lower_even = 0, lower_odd = 0, upper_even = 0, upper_odd = 0;
  for (long long i = 0; i < nr; ++i) {
    const long long k = i + best_offset;
    if (k < 0 || k >= ns) continue;
    // Doublets unresolved in double precision carry no ordering information.
    const bool unresolved = (k > 0 && states[k].energy - states[k - 1].energy < 1e-9) ||
                            (k + 1 < ns && states[k + 1].energy - states[k].energy < 1e-9);
    if (unresolved) continue;
    const bool even = states[k].parity == Parity::Even;
    if (roots.roots[i].member == BranchMember::Lower) {
      (even ? lower_even : lower_odd)++;
    } else {
      (even ? upper_even : upper_odd)++;
    }
  }
  RegWkbParityRule rule;
  if (lower_even + lower_odd + upper_even + upper_odd == 0) {
    throw AccuracyError("no root could be labelled unambiguously", 0.0);
  }
  if (lower_even > 0 && lower_odd == 0 && upper_even == 0) {
    rule.even_member = BranchMember::Lower;
  } else if (upper_even > 0 && upper_odd == 0 && lower_even == 0) {
    rule.even_member = BranchMember::Upper;
  } else {
    std::ostringstream os;
    os << "inconsistent parity labels (lower: " << lower_even << " even/" << lower_odd << " odd, upper: "
       << upper_even << " even/" << upper_odd << " odd)";
    throw AccuracyError(os.str(), 0.0);
  }
  return rule;
}

bool is_even(const RegWkbRoot& root, const RegWkbParityRule& rule) { return root.member == rule.even_member; }

EhrenfestPoint regwkb_ehrenfest(double hbar, const RegWkbParityRule& rule) {
  const RegWkbRoots roots = regwkb_roots(hbar, -20.0 * hbar, 20.0 * hbar);
  std::vector<double> even;
  for (const auto& r : roots.roots) {
    if (is_even(r, rule)) even.push_back(r.energy);
  }
  if (even.size() < 2) throw InsufficientSupportError("fewer than two even regularized-WKB roots in window");
  EhrenfestPoint p;
  p.hbar = hbar;
  p.method = EhrenfestMethod::RegWkb;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < even.size(); ++i) {
    const double gap = even[i] - even[i - 1];
    if (gap < best) {
      best = gap;
      p.eps_lo = even[i - 1];
      p.eps_hi = even[i];
    }
  }
  p.nu_e = transition_frequency(p.eps_lo, p.eps_hi, hbar);
  return p;
}

}  // namespace qbreak::semiclassics

#pragma once

#include <string>

namespace qbreak {

enum class EhrenfestMethod { Numeric, WkbSingleWell, RegWkb };

std::string to_string(EhrenfestMethod m);
EhrenfestMethod parse_method(const std::string& text);

// Minimal transition frequency at one hbar, with the pair of levels that
// attains it: nu_E = (eps_hi - eps_lo) / (2 pi hbar).
struct EhrenfestPoint {
  double hbar = 0.0;
  double nu_e = 0.0;
  EhrenfestMethod method = EhrenfestMethod::Numeric;
  double eps_lo = 0.0;
  double eps_hi = 0.0;
  int n_lo = -1;  // quantum numbers, -1 when not known (regularized WKB)
  int n_hi = -1;

  double inverse() const { return 1.0 / nu_e; }
};

// nu = (eps_hi - eps_lo) / (2 pi hbar)
double transition_frequency(double eps_lo, double eps_hi, double hbar);

}  // namespace qbreak

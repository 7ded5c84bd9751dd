#pragma once

#include <string>
#include <vector>

#include "qbreak/ehrenfest.hpp"
#include "qbreak/spectrum.hpp"

namespace qbreak::semiclassics {

// ---- Single well V = q^(2 beta) / (2 beta), standard WKB -------------------

struct WkbLevel {
  int n = 0;
  double energy = 0.0;
  double weight = 0.0;  // |c|^2 of the origin-centred packet; 0 for odd n
};

// Action quantization constant: area(eps) = 2 pi eps^((beta+1)/(2 beta)) / delta.
double wkb_delta(int beta);

// eps_n = [(n + 1/2) hbar delta]^(2 beta / (beta + 1))
double wkb_energy(int beta, double hbar, int n);

// Continuous inverse of wkb_energy: n(eps) = eps^((beta+1)/(2 beta)) / (hbar delta) - 1/2.
double wkb_level_index(int beta, double hbar, double eps);

// dn/deps of the inverse above.
double wkb_level_density(int beta, double hbar, double eps);

double wkb_sigma(int beta, double hbar, double eps);

// Overlap weight |c_eps|^2 of the Gaussian packet with the WKB eigenstate at
// energy eps > 0 (even states).
double wkb_weight(int beta, double hbar, double eps);

// Levels n = 0 .. count-1, weights filled for even n.
std::vector<WkbLevel> wkb_levels(int beta, double hbar, int count);

// hbar -> 0 limit of the frequency distribution, 4 K0(4 pi |nu|).
double limit_distribution(double nu);

// nu_E = (eps_2 - eps_0) / (2 pi hbar) from the closed-form levels.
EhrenfestPoint single_well_ehrenfest(int beta, double hbar);

// ---- Double well alpha = 1, beta = 2: regularized quantization near eps = 0 --

// Which of the two roots per 2 pi branch sits lower in energy.
enum class BranchMember { Lower, Upper };

struct RegWkbRoot {
  double energy = 0.0;
  long long branch_index = 0;  // phi = 2 pi k -/+ arctan(exp(pi eps / hbar))
  BranchMember member = BranchMember::Lower;
  double phase_at_root = 0.0;  // phi(eps, hbar), unreduced
};

struct RegWkbRoots {
  double hbar = 0.0;
  std::vector<RegWkbRoot> roots;  // ascending energy
  std::string warning;            // non-empty when the window leaves the validity range
};

// Energy range |eps| <= this is treated as inside the regularized regime.
inline constexpr double kRegWkbValidity = 0.1;

// phi = 4/(3 hbar) - (eps/hbar) ln(hbar/16) - arg Gamma(1/2 + i eps/hbar) - pi,
// evaluated in extended precision.
long double regwkb_phase(double eps, double hbar);

// 1/sqrt(1 + exp(2 pi eps / hbar)) - cos phi(eps, hbar)
double regwkb_residual(double eps, double hbar);

RegWkbRoots regwkb_roots(double hbar, double eps_min, double eps_max);

// Parity assignment of regularized-WKB roots, fixed by comparison with the
// numerically computed spectrum.
struct RegWkbParityRule {
  BranchMember even_member = BranchMember::Lower;
};

// Pairs the roots in the window of `reference` (which must contain both
// parities) with its numeric eigenvalues by rank and returns the member type
// that carries the even states. Throws if the labels are inconsistent.
RegWkbParityRule calibrate_regwkb_parity(const SpectralWindow& reference);

bool is_even(const RegWkbRoot& root, const RegWkbParityRule& rule);

// Minimal gap between consecutive even roots with |eps| <= 20 hbar.
EhrenfestPoint regwkb_ehrenfest(double hbar, const RegWkbParityRule& rule = {});

}  // namespace qbreak::semiclassics

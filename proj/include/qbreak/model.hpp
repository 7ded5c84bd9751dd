#pragma once

#include <string>
#include <vector>

namespace qbreak {

enum class WellKind { Single, Double };

std::string to_string(WellKind kind);

// Rescaled Hamiltonian H = p^2/2 + A q^(2 alpha)/(2 alpha) + q^(2 beta)/(2 beta)
// with A = 0 (single well) or A = -1 (double well).
struct PotentialSpec {
  int alpha = 1;  // ignored for single wells
  int beta = 2;
  WellKind kind = WellKind::Double;

  static PotentialSpec single_well(int beta);
  static PotentialSpec double_well(int alpha, int beta);
  // V = q^2/2. Outside the physical family (beta > alpha >= 1 fails) and
  // only meant as an exactly solvable reference.
  static PotentialSpec harmonic();

  bool is_double() const { return kind == WellKind::Double; }
  bool operator==(const PotentialSpec&) const = default;
};

// Throws ConfigError unless beta > alpha >= 1 (or the potential is the harmonic
// reference single well with beta == 1).
void validate(const PotentialSpec& spec);

std::string describe(const PotentialSpec& spec);

// Physical Hamiltonian p^2/2m + A q^(2a)/(2a) + B q^(2b)/(2b).
struct PhysicalParams {
  double mass = 1.0;
  double a_coeff = 0.0;  // A <= 0
  double b_coeff = 1.0;  // B > 0
  double tau = 1.0;      // time-scale unit, only used when A = 0
};

// Multiplicative factors relating the two unit systems:
//   eps_rescaled  = energy_factor * eps_physical
//   hbar_rescaled = hbar_factor   * hbar_physical
struct Rescaling {
  PotentialSpec spec;
  double energy_factor = 1.0;
  double hbar_factor = 1.0;

  double physical_energy(double eps_rescaled) const { return eps_rescaled / energy_factor; }
  double physical_hbar(double hbar_rescaled) const { return hbar_rescaled / hbar_factor; }
  double rescaled_energy(double eps_physical) const { return eps_physical * energy_factor; }
  double rescaled_hbar(double hbar_physical) const { return hbar_physical * hbar_factor; }
};

Rescaling rescale_physical(const PhysicalParams& params, int alpha, int beta);

double potential_value(const PotentialSpec& spec, double q);
double potential_derivative(const PotentialSpec& spec, double q);

// Global minimum of V: 0 for single wells, -(1/(2a) - 1/(2b)) at |q| = 1 for
// double wells.
double potential_minimum(const PotentialSpec& spec);

// Real solutions of V(q) = eps in ascending order. A double well below the
// barrier returns four roots; at eps == 0 the inner pair is {0, 0}.
std::vector<double> turning_points(const PotentialSpec& spec, double eps);

// Outermost positive turning point.
double outer_turning_point(const PotentialSpec& spec, double eps);

// Area of the sublevel set {H <= eps} in phase space.
double action_area(const PotentialSpec& spec, double eps);

// d(area)/d(eps); equals the summed periods of all connected orbits at eps.
double action_area_derivative(const PotentialSpec& spec, double eps);

// Approximate number of states with energy in [eps - hbar, eps + hbar].
double weyl_count(const PotentialSpec& spec, double eps, double hbar);

// Period of the orbit through the positive allowed component at eps. For a
// double well below the barrier this is one lobe; throws DivergentPeriodError
// on the separatrix eps == 0.
double classical_period(const PotentialSpec& spec, double eps);

}  // namespace qbreak

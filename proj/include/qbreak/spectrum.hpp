#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "qbreak/model.hpp"

namespace qbreak {

enum class Parity { Even, Odd };
enum class ParityFilter { Even, Odd, Both };

const char* to_string(Parity p);

// Uniform grid q_min + i * step, i = 0 .. count - 1.
struct Grid {
  double q_min = 0.0;
  double q_max = 0.0;
  double step = 0.0;

  std::size_t count() const;
  double at(std::size_t i) const { return q_min + static_cast<double>(i) * step; }
};

// One eigenpair of H = -hbar^2/2 d^2/dq^2 + V(q).
//
// The wavefunction is stored on the half line q_i = i * step, i = 0..M, and
// mirrored by parity; `grid` describes the full symmetric grid covered by
// the stored samples. Normalization is the discrete one over the full grid,
// sum_i phi(q_i)^2 * step = 1, taken before any truncation of the stored
// range.
struct EigenState {
  int n = 0;  // node count on the full line
  double energy = 0.0;
  Parity parity = Parity::Even;
  Grid grid;
  std::vector<double> half_samples;
  double domain_max = 0.0;      // solver domain is [-domain_max, domain_max]
  double endpoint_amplitude = 0.0;

  // phi at full-grid index j (q = grid.q_min + j * step).
  double sample(std::size_t j) const;
  std::vector<double> samples() const;
  std::size_t sample_count() const { return half_samples.empty() ? 0 : 2 * half_samples.size() - 1; }
};

struct SpectralWindow {
  PotentialSpec spec;
  double hbar = 0.0;
  double eps_min = 0.0;
  double eps_max = 0.0;
  std::vector<EigenState> states;  // ascending energy
  double grid_check_change = 0.0;  // largest |dE| seen by the half-step check
};

struct SolveOptions {
  // Numerov step = (shortest de Broglie wavelength in the window) / this.
  double points_per_wavelength = 400.0;
  // Raises the density above when the window's kinetic energy scale would
  // otherwise push the discretization error past this (0 disables).
  double target_abs_error = 2.5e-11;
  // The domain ends where the WKB decay exponent beyond the outer turning
  // point at eps_max reaches this value (amplitude ~ exp(-value)).
  double tail_decay_exponent = 40.0;
  // Lower bound on the domain as a multiple of the outer turning point.
  double min_domain_factor = 1.05;
  double rel_tol = 1e-12;
  // Number of states re-solved with half the step as a resolution check
  // (0 disables). The check throws AccuracyError on failure.
  int grid_check_states = 2;
  double grid_check_tol = 1e-10;
  // Stored samples are cut to |q| <= keep_samples_to after all checks.
  double keep_samples_to = std::numeric_limits<double>::infinity();
  // Worker threads for independent eigenstate searches (0 = hardware).
  unsigned workers = 1;
};

// Approximate quantum number from the phase-space area:
// n ~ area(eps) / (2 pi hbar) - 1/2, clamped at 0.
double eigen_index_estimate(const PotentialSpec& spec, double hbar, double eps);

// All eigenstates with energy in [eps_min, eps_max] of the requested parity,
// from a parity-reduced Numerov shooting solver: node counting isolates each
// eigenvalue, then the mismatch of the outward and inward solutions at an
// interior matching point is driven to zero.
SpectralWindow solve_eigen_window(const PotentialSpec& spec, double hbar, double eps_min,
                                  double eps_max, ParityFilter filter, const SolveOptions& opts = {});

// Lowest k eigenvalues of the second-order finite-difference Hamiltonian on
// [-q_max, q_max] with grid_points interior nodes and zero boundary values.
std::vector<double> dense_oracle(const PotentialSpec& spec, double hbar, double q_max,
                                 std::size_t grid_points, std::size_t k);

// Eigenvalues first..last of the same discretization, Richardson-extrapolated
// from grid_points and 2 * grid_points + 1 interior nodes (step halved).
std::vector<double> dense_oracle_richardson(const PotentialSpec& spec, double hbar, double q_max,
                                            std::size_t grid_points, std::size_t first,
                                            std::size_t last);

}  // namespace qbreak

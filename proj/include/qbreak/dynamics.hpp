#pragma once

#include <complex>
#include <string>
#include <vector>

#include "qbreak/ehrenfest.hpp"
#include "qbreak/model.hpp"
#include "qbreak/spectrum.hpp"

namespace qbreak {

// Minimum-uncertainty Gaussian centred at (p0, q0) with width sqrt(hbar).
struct WavePacket {
  double hbar = 0.0;
  double p0 = 0.0;
  double q0 = 0.0;
};

// (pi hbar)^(-1/4) exp(-(q - q0)^2 / (2 hbar)) exp(i p0 q / hbar)
std::complex<double> packet_value(const WavePacket& wp, double q);

// (pi hbar)^(-1) exp(-(p - p0)^2 / hbar) exp(-(q - q0)^2 / hbar)
double wigner_value(const WavePacket& wp, double p, double q);

struct OverlapEntry {
  int n = 0;
  double energy = 0.0;
  double weight = 0.0;  // |c_n|^2
};

struct OverlapSet {
  std::vector<OverlapEntry> entries;  // ascending energy
  double hbar = 0.0;
  double captured_mass = 0.0;   // sum of weights
  double max_odd_weight = 0.0;  // largest |c|^2 among dropped odd states
  std::string warning;          // set when captured_mass < kMinCapturedMass
};

inline constexpr double kMinCapturedMass = 0.999;
inline constexpr double kOddWeightLimit = 1e-20;
inline constexpr double kDefaultWeightFloor = 1e-12;

// c_n = <psi|phi_n> by composite Simpson on each eigenstate grid. Odd states
// are checked against kOddWeightLimit (AccuracyError otherwise) and dropped
// when the packet is parity-symmetric.
OverlapSet compute_overlaps(const SpectralWindow& window, const WavePacket& wp);

// |sum_n |c_n|^2 exp(-i eps_n t / hbar)|^2
double survival_probability(const OverlapSet& os, double t);

struct FrequencyLine {
  double nu = 0.0;
  double weight = 0.0;  // |c_n|^2 |c_m|^2, one sign of the symmetric pair
};

struct FrequencySpectrum {
  std::vector<FrequencyLine> lines;  // nu > 0, ascending
  double zero_weight = 0.0;          // diagonal (and exactly degenerate) terms
  double hbar = 0.0;

  // 2 * sum(lines) + zero_weight; equals captured_mass^2.
  double total_weight() const;
};

FrequencySpectrum frequency_spectrum(const OverlapSet& os);

// Same as survival_probability but from the line decomposition:
// zero_weight + 2 sum_l w_l cos(2 pi nu_l t).
double survival_from_spectrum(const FrequencySpectrum& fs, double t);

struct DensityBin {
  double nu = 0.0;  // bin centre
  double density = 0.0;
};

// Positive-frequency density histogram of the line spectrum on [0, nu_max]:
// sum of line weights per bin divided by bin_width. Computed straight from
// the overlaps, so it scales to sets with millions of pairs.
std::vector<DensityBin> binned_density(const OverlapSet& os, double bin_width, double nu_max);

// Smallest transition frequency among entries whose weight is at least
// weight_floor. Throws InsufficientSupportError with fewer than two.
EhrenfestPoint ehrenfest_frequency(const OverlapSet& os, double weight_floor = kDefaultWeightFloor);

// Even single-well WKB levels with eps_n <= eps_cutoff_hbar * hbar and
// closed-form weights, packaged like a numeric overlap set.
OverlapSet wkb_overlap_set(int beta, double hbar, double eps_cutoff_hbar = 40.0);

struct NumericRunOptions {
  SolveOptions solve;
  double weight_floor = kDefaultWeightFloor;
  double upper_window_hbar = 20.0;  // eps_max = this * hbar
  double lower_window_hbar = 22.0;  // double wells: eps_min = -this * hbar
  int max_widenings = 6;            // each multiplies the window by 1.5
  bool check_odd = true;            // solve odd states near eps = 0 and test their weights
};

struct NumericRun {
  EhrenfestPoint point;
  OverlapSet overlaps;
  double eps_min = 0.0;
  double eps_max = 0.0;
  int even_states = 0;
  int odd_states_checked = 0;
  double max_odd_weight = 0.0;
  double grid_check_change = 0.0;
  double parseval_defect = 0.0;
};

// Full pipeline at one hbar: even spectrum around the packet energy ->
// overlaps with the packet at the origin -> minimal weighted frequency.
// Throws AccuracyError when the window cannot capture kMinCapturedMass.
NumericRun numeric_ehrenfest(const PotentialSpec& spec, double hbar, const NumericRunOptions& opts = {});

}  // namespace qbreak

#include "qbreak/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qbreak/errors.hpp"
#include "qbreak/semiclassics.hpp"

namespace qbreak {
namespace {

// Recursive pairwise summation; fixed order keeps results bit-stable.
template <class Get>
double pairwise_sum(std::size_t first, std::size_t last, const Get& get) {
  const std::size_t n = last - first;
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = first; i < last; ++i) s += get(i);
    return s;
  }
  const std::size_t mid = first + n / 2;
  return pairwise_sum(first, mid, get) + pairwise_sum(mid, last, get);
}

double simpson_weight(std::size_t j, std::size_t last) {
  if (j == 0 || j == last) return 1.0;
  return (j % 2 == 1) ? 4.0 : 2.0;
}

bool packet_is_symmetric(const WavePacket& wp) { return wp.p0 == 0.0 && wp.q0 == 0.0; }

std::complex<double> overlap(const EigenState& st, const WavePacket& wp) {
  const std::size_t count = st.sample_count();
  if (count < 3) throw AccuracyError("eigenstate grid too short for Simpson quadrature", 0.0);
  const std::size_t last = count - 1;
  const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(st.half_samples.size()) - 1;
  const double h = st.grid.step;
  // Positions from integer offsets so that q(-j) == -q(j) exactly.
  auto q_at = [&](std::size_t j) { return static_cast<double>(static_cast<std::ptrdiff_t>(j) - half) * h; };
  const double re = pairwise_sum(0, count, [&](std::size_t j) {
    return simpson_weight(j, last) * st.sample(j) * packet_value(wp, q_at(j)).real();
  });
  double im = 0.0;
  if (wp.p0 != 0.0) {
    // The eigenfunctions are real, so <psi|phi> = conj(sum psi phi).
    im = -pairwise_sum(0, count, [&](std::size_t j) {
      return simpson_weight(j, last) * st.sample(j) * packet_value(wp, q_at(j)).imag();
    });
  }
  return {re * h / 3.0, im * h / 3.0};
}

}  // namespace

std::complex<double> packet_value(const WavePacket& wp, double q) {
  const double norm = std::pow(std::numbers::pi * wp.hbar, -0.25);
  const double d = q - wp.q0;
  const double amp = norm * std::exp(-d * d / (2.0 * wp.hbar));
  if (wp.p0 == 0.0) return {amp, 0.0};
  const double phase = wp.p0 * q / wp.hbar;
  return {amp * std::cos(phase), amp * std::sin(phase)};
}

double wigner_value(const WavePacket& wp, double p, double q) {
  const double dp = p - wp.p0;
  const double dq = q - wp.q0;
  return std::exp(-(dp * dp + dq * dq) / wp.hbar) / (std::numbers::pi * wp.hbar);
}

OverlapSet compute_overlaps(const SpectralWindow& window, const WavePacket& wp) {
  if (!(wp.hbar > 0.0)) throw DomainError("packet hbar must be positive");
  if (std::abs(window.hbar - wp.hbar) > 1e-14 * wp.hbar) {
    throw ConfigError("packet and spectral window use different hbar");
  }
  OverlapSet out;
  out.hbar = wp.hbar;
  const bool symmetric = packet_is_symmetric(wp);
  for (const auto& st : window.states) {
    const double weight = std::norm(overlap(st, wp));
    if (symmetric && st.parity == Parity::Odd) {
      out.max_odd_weight = std::max(out.max_odd_weight, weight);
      if (weight >= kOddWeightLimit) {
        std::ostringstream os;
        os << "odd state n=" << st.n << " has weight " << weight << " with a parity-symmetric packet";
        throw AccuracyError(os.str(), weight);
      }
      continue;
    }
    out.entries.push_back({st.n, st.energy, weight});
  }
  std::sort(out.entries.begin(), out.entries.end(),
            [](const OverlapEntry& a, const OverlapEntry& b) { return a.energy < b.energy; });
  out.captured_mass =
      pairwise_sum(0, out.entries.size(), [&](std::size_t i) { return out.entries[i].weight; });
  if (out.captured_mass < kMinCapturedMass) {
    std::ostringstream os;
    os << "captured mass " << out.captured_mass << " below " << kMinCapturedMass << "; widen the energy window";
    out.warning = os.str();
  }
  return out;
}

double survival_probability(const OverlapSet& os, double t) {
  if (t < 0.0) throw DomainError("time must be non-negative");
  const auto& e = os.entries;
  const double re = pairwise_sum(0, e.size(), [&](std::size_t i) {
    return e[i].weight * std::cos(e[i].energy * t / os.hbar);
  });
  const double im = pairwise_sum(0, e.size(), [&](std::size_t i) {
    return e[i].weight * std::sin(e[i].energy * t / os.hbar);
  });
  return re * re + im * im;
}

double FrequencySpectrum::total_weight() const {
  const double s = pairwise_sum(0, lines.size(), [&](std::size_t i) { return lines[i].weight; });
  return 2.0 * s + zero_weight;
}

FrequencySpectrum frequency_spectrum(const OverlapSet& os) {
  if (os.entries.empty()) throw InsufficientSupportError("empty overlap set");
  FrequencySpectrum fs;
  fs.hbar = os.hbar;
  const auto& e = os.entries;
  const double scale = 1.0 / (2.0 * std::numbers::pi * os.hbar);
  fs.zero_weight = pairwise_sum(0, e.size(), [&](std::size_t i) { return e[i].weight * e[i].weight; });
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t j = i + 1; j < e.size(); ++j) {
      const double w = e[i].weight * e[j].weight;
      const double nu = (e[j].energy - e[i].energy) * scale;
      if (nu > 0.0) {
        fs.lines.push_back({nu, w});
      } else {
        fs.zero_weight += 2.0 * w;
      }
    }
  }
  std::stable_sort(fs.lines.begin(), fs.lines.end(),
                   [](const FrequencyLine& a, const FrequencyLine& b) { return a.nu < b.nu; });
  return fs;
}

double survival_from_spectrum(const FrequencySpectrum& fs, double t) {
  const double s = pairwise_sum(0, fs.lines.size(), [&](std::size_t i) {
    return fs.lines[i].weight * std::cos(2.0 * std::numbers::pi * fs.lines[i].nu * t);
  });
  return fs.zero_weight + 2.0 * s;
}

std::vector<DensityBin> binned_density(const OverlapSet& os, double bin_width, double nu_max) {
  if (!(bin_width > 0.0) || !(nu_max > 0.0)) throw DomainError("bin width and range must be positive");
  const auto bins = static_cast<std::size_t>(std::llround(nu_max / bin_width));
  if (bins == 0) throw DomainError("range shorter than one bin");
  std::vector<double> sums(bins, 0.0);
  const auto& e = os.entries;
  const double scale = 1.0 / (2.0 * std::numbers::pi * os.hbar);
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t j = i + 1; j < e.size(); ++j) {
      const double nu = (e[j].energy - e[i].energy) * scale;
      if (!(nu > 0.0)) continue;
      // Energies are sorted, so nu only grows with j.
      const auto b = static_cast<std::size_t>(nu / bin_width);
      if (b >= bins) break;
      sums[b] += e[i].weight * e[j].weight;
    }
  }
  std::vector<DensityBin> out(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    out[b].nu = (static_cast<double>(b) + 0.5) * bin_width;
    out[b].density = sums[b] / bin_width;
  }
  return out;
}

EhrenfestPoint ehrenfest_frequency(const OverlapSet& os, double weight_floor) {
  if (!(weight_floor > 0.0)) throw DomainError("weight floor must be positive");
  std::vector<const OverlapEntry*> kept;
  for (const auto& e : os.entries) {
    if (e.weight >= weight_floor) kept.push_back(&e);
  }
  if (kept.size() < 2) throw InsufficientSupportError("fewer than two states above the weight floor");
  EhrenfestPoint p;
  p.hbar = os.hbar;
  p.method = EhrenfestMethod::Numeric;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < kept.size(); ++i) {
    const double gap = kept[i]->energy - kept[i - 1]->energy;
    if (gap > 0.0 && gap < best) {
      best = gap;
      p.eps_lo = kept[i - 1]->energy;
      p.eps_hi = kept[i]->energy;
      p.n_lo = kept[i - 1]->n;
      p.n_hi = kept[i]->n;
    }
  }
  if (!std::isfinite(best)) throw InsufficientSupportError("all weighted states are degenerate");
  p.nu_e = transition_frequency(p.eps_lo, p.eps_hi, os.hbar);
  return p;
}

OverlapSet wkb_overlap_set(int beta, double hbar, double eps_cutoff_hbar) {
  OverlapSet out;
  out.hbar = hbar;
  const double cutoff = eps_cutoff_hbar * hbar;
  for (int n = 0;; n += 2) {
    const double eps = semiclassics::wkb_energy(beta, hbar, n);
    if (eps > cutoff && n > 0) break;
    out.entries.push_back({n, eps, semiclassics::wkb_weight(beta, hbar, eps)});
  }
  out.captured_mass =
      pairwise_sum(0, out.entries.size(), [&](std::size_t i) { return out.entries[i].weight; });
  return out;
}

NumericRun numeric_ehrenfest(const PotentialSpec& spec, double hbar, const NumericRunOptions& opts) {
  validate(spec);
  if (!(hbar > 0.0)) throw DomainError("hbar must be positive");
  const WavePacket wp{hbar, 0.0, 0.0};
  SolveOptions solve = opts.solve;
  solve.keep_samples_to = std::min(solve.keep_samples_to, 12.0 * std::sqrt(hbar));

  const double vmin = potential_minimum(spec);
  double lo = spec.is_double() ? std::max(vmin, -opts.lower_window_hbar * hbar) : vmin;
  double hi = opts.upper_window_hbar * hbar;

  NumericRun run;
  for (int attempt = 0;; ++attempt) {
    const SpectralWindow window = solve_eigen_window(spec, hbar, lo, hi, ParityFilter::Even, solve);
    run.overlaps = compute_overlaps(window, wp);
    run.even_states = static_cast<int>(window.states.size());
    run.grid_check_change = window.grid_check_change;
    if (run.overlaps.captured_mass >= kMinCapturedMass) break;
    if (attempt >= opts.max_widenings) {
      throw AccuracyError("energy window never captured enough packet mass", run.overlaps.captured_mass);
    }
    hi *= 1.5;
    if (spec.is_double()) lo = std::max(vmin, lo * 1.5);
  }
  run.eps_min = lo;
  run.eps_max = hi;

  if (opts.check_odd) {
    // Spot check of the parity selection rule on the odd states nearest the
    // packet energy.
    const auto& entries = run.overlaps.entries;
    const double odd_hi = spec.is_double() ? 2.0 * hbar
                                           : entries[std::min<std::size_t>(entries.size() - 1, 3)].energy;
    const double odd_lo = spec.is_double() ? std::max(vmin, -2.0 * hbar) : vmin;
    SolveOptions odd_solve = solve;
    odd_solve.grid_check_states = 0;
    const SpectralWindow odd = solve_eigen_window(spec, hbar, odd_lo, odd_hi, ParityFilter::Odd, odd_solve);
    const OverlapSet odd_set = compute_overlaps(odd, wp);
    run.odd_states_checked = static_cast<int>(odd.states.size());
    run.max_odd_weight = odd_set.max_odd_weight;
  }

  const FrequencySpectrum fs = frequency_spectrum(run.overlaps);
  const double cm = run.overlaps.captured_mass;
  run.parseval_defect = std::abs(fs.total_weight() - cm * cm);
  run.point = ehrenfest_frequency(run.overlaps, opts.weight_floor);
  return run;
}

}  // namespace qbreak

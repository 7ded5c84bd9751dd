#include "qbreak/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <atomic>
#include <future>
#include <map>
#include <numbers>
#include <sstream>
#include <thread>

#include "qbreak/errors.hpp"
#include "qbreak/tridiag.hpp"

namespace qbreak {
namespace {

constexpr double kRenormAbove = 1e150;
constexpr double kRenormFactor = 1e-150;
constexpr double kMaxNumerovCoupling = 0.25;  // h^2 f / 12 must stay well below 1

// Numerov discretization of y'' = f(q) y, f = 2 (V - E) / hbar^2, on the
// half line q_i = i * h, i = 0..N, with y_N = 0.
class HalfLineProblem {
 public:
  HalfLineProblem(const PotentialSpec& spec, double hbar, double q_max, std::size_t intervals)
      : hbar_(hbar), q_max_(q_max), n_(intervals), h_(q_max / static_cast<double>(intervals)) {
    potential_.resize(n_ + 1);
    for (std::size_t i = 0; i <= n_; ++i) potential_[i] = potential_value(spec, h_ * static_cast<double>(i));
    scale_ = h_ * h_ / 12.0 * 2.0 / (hbar_ * hbar_);
  }

  std::size_t intervals() const { return n_; }
  double step() const { return h_; }
  double q_max() const { return q_max_; }
  double coupling(std::size_t i, double e) const { return scale_ * (potential_[i] - e); }

  // Largest |g| = h^2 |f| / 12 over the grid at energy e.
  double max_coupling(double e) const {
    double g = 0.0;
    for (double v : potential_) g = std::max(g, std::abs(scale_ * (v - e)));
    return g;
  }

  // Number of sign changes of the outward solution on [0, q_N]; equals the
  // number of eigenvalues of this parity below e.
  int count_below(double e, Parity parity) const {
    double y_prev, y_cur;
    start_outward(e, parity, y_prev, y_cur);
    int changes = 0;
    double last_sign = parity == Parity::Even ? 1.0 : (y_cur > 0.0 ? 1.0 : -1.0);
    double g_prev = coupling(0, e);
    double g_cur = coupling(1, e);
    for (std::size_t i = 1; i < n_; ++i) {
      const double g_next = coupling(i + 1, e);
      double y_next = (2.0 * (1.0 + 5.0 * g_cur) * y_cur - (1.0 - g_prev) * y_prev) / (1.0 - g_next);
      if (std::abs(y_next) > kRenormAbove) {
        y_next *= kRenormFactor;
        y_cur *= kRenormFactor;
      }
      if (y_next != 0.0) {
        const double s = y_next > 0.0 ? 1.0 : -1.0;
        if (s != last_sign) {
          ++changes;
          last_sign = s;
        }
      }
      y_prev = y_cur;
      y_cur = y_next;
      g_prev = g_cur;
      g_cur = g_next;
    }
    return changes;
  }

  // Outward values at (m, m + 1) and inward values at (m, m + 1).
  struct MatchValues {
    double out_m, out_m1, in_m, in_m1;
  };

  MatchValues match_values(double e, Parity parity, std::size_t m) const {
    MatchValues mv{};
    {
      double y_prev, y_cur;
      start_outward(e, parity, y_prev, y_cur);
      double g_prev = coupling(0, e);
      double g_cur = coupling(1, e);
      // y_prev = y_i-1, y_cur = y_i with i = 1
      for (std::size_t i = 1; i <= m; ++i) {
        const double g_next = coupling(i + 1, e);
        double y_next = (2.0 * (1.0 + 5.0 * g_cur) * y_cur - (1.0 - g_prev) * y_prev) / (1.0 - g_next);
        if (std::abs(y_next) > kRenormAbove) {
          y_next *= kRenormFactor;
          y_cur *= kRenormFactor;
        }
        y_prev = y_cur;
        y_cur = y_next;
        g_prev = g_cur;
        g_cur = g_next;
      }
      // After the loop y_cur = y_{m+1}, y_prev = y_m (m >= 1).
      mv.out_m = y_prev;
      mv.out_m1 = y_cur;
    }
    {
      double y_next = 0.0;  // y_{i+1}
      double y_cur = 1.0;   // y_i, i = N - 1
      double g_next = coupling(n_, e);
      double g_cur = coupling(n_ - 1, e);
      for (std::size_t i = n_ - 1; i > m; --i) {
        const double g_prev = coupling(i - 1, e);
        double y_prev = (2.0 * (1.0 + 5.0 * g_cur) * y_cur - (1.0 - g_next) * y_next) / (1.0 - g_prev);
        if (std::abs(y_prev) > kRenormAbove) {
          y_prev *= kRenormFactor;
          y_cur *= kRenormFactor;
        }
        y_next = y_cur;
        y_cur = y_prev;
        g_next = g_cur;
        g_cur = g_prev;
      }
      mv.in_m = y_cur;
      mv.in_m1 = y_next;
    }
    return mv;
  }

  // Normalized Wronskian of the outward and inward solutions at m; vanishes
  // exactly at eigenvalues of the discrete problem.
  double mismatch(double e, Parity parity, std::size_t m) const {
    const MatchValues v = match_values(e, parity, m);
    const double w = v.out_m * v.in_m1 - v.out_m1 * v.in_m;
    return w / (std::hypot(v.out_m, v.out_m1) * std::hypot(v.in_m, v.in_m1));
  }

  // Full half-line eigenfunction at energy e, joined at m and normalized on
  // the mirrored grid.
  std::vector<double> eigenfunction(double e, Parity parity, std::size_t m) const {
    std::vector<double> y(n_ + 1, 0.0);
    double y0, y1;
    start_outward(e, parity, y0, y1);
    y[0] = y0;
    y[1] = y1;
    for (std::size_t i = 1; i <= m; ++i) {
      const double next = (2.0 * (1.0 + 5.0 * coupling(i, e)) * y[i] - (1.0 - coupling(i - 1, e)) * y[i - 1]) /
                          (1.0 - coupling(i + 1, e));
      y[i + 1] = next;
      if (std::abs(next) > kRenormAbove) {
        for (std::size_t j = 0; j <= i + 1; ++j) y[j] *= kRenormFactor;
      }
    }
    std::vector<double> in(n_ + 1, 0.0);
    in[n_] = 0.0;
    in[n_ - 1] = 1.0;
    for (std::size_t i = n_ - 1; i > m; --i) {
      const double prev = (2.0 * (1.0 + 5.0 * coupling(i, e)) * in[i] - (1.0 - coupling(i + 1, e)) * in[i + 1]) /
                          (1.0 - coupling(i - 1, e));
      in[i - 1] = prev;
      if (std::abs(prev) > kRenormAbove) {
        for (std::size_t j = i - 1; j <= n_; ++j) in[j] *= kRenormFactor;
      }
    }
    // Least-squares scale of the inward branch onto the outward one at (m, m+1).
    const double s = (y[m] * in[m] + y[m + 1] * in[m + 1]) / (in[m] * in[m] + in[m + 1] * in[m + 1]);
    for (std::size_t i = m + 1; i <= n_; ++i) y[i] = s * in[i];
    double norm2 = y[0] * y[0];
    for (std::size_t i = 1; i <= n_; ++i) norm2 += 2.0 * y[i] * y[i];
    norm2 *= h_;
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& v : y) v *= inv;
    return y;
  }

 private:
  void start_outward(double e, Parity parity, double& y0, double& y1) const {
    if (parity == Parity::Even) {
      // Mirror condition y_-1 = y_1.
      y0 = 1.0;
      y1 = (1.0 + 5.0 * coupling(0, e)) * y0 / (1.0 - coupling(1, e));
    } else {
      y0 = 0.0;
      y1 = h_;
    }
  }

  double hbar_;
  double q_max_;
  std::size_t n_;
  double h_;
  double scale_;
  std::vector<double> potential_;
};

// Brent's root finder on a sign-changing bracket.
template <class F>
double brent_root(F&& f, double a, double b, double fa, double fb, double tol) {
  double c = a, fc = fa, d = b - a, e = d;
  for (int iter = 0; iter < 200; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * tol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = f(b);
  }
  return b;
}

int sign_changes(const std::vector<double>& y, std::size_t from) {
  double peak = 0.0;
  for (double v : y) peak = std::max(peak, std::abs(v));
  const double floor = 1e-10 * peak;
  int changes = 0;
  double last = 0.0;
  for (std::size_t i = from; i < y.size(); ++i) {
    if (std::abs(y[i]) <= floor) continue;
    const double s = y[i] > 0.0 ? 1.0 : -1.0;
    if (last != 0.0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

struct DomainChoice {
  double q_max;
  std::size_t intervals;
};

DomainChoice choose_domain(const PotentialSpec& spec, double hbar, double eps_lo, double eps_top,
                           const SolveOptions& opts) {
  const double vmin = potential_minimum(spec);
  const double q_turn = outer_turning_point(spec, eps_top);
  // March outward accumulating the WKB decay exponent int kappa dq / hbar.
  const double dq = std::max(q_turn, 1e-3) * 1e-4;
  double q = q_turn;
  double exponent = 0.0;
  double kappa_prev = 0.0;
  while (exponent < opts.tail_decay_exponent) {
    const double q_next = q + dq;
    const double kappa = std::sqrt(std::max(0.0, 2.0 * (potential_value(spec, q_next) - eps_top)));
    exponent += 0.5 * (kappa + kappa_prev) * dq / hbar;
    kappa_prev = kappa;
    q = q_next;
  }
  const double q_max = std::max(q, opts.min_domain_factor * q_turn);

  const double p_max = std::sqrt(2.0 * (eps_top - vmin));
  const double wavelength = 2.0 * std::numbers::pi * hbar / p_max;
  // Numerov's eigenvalue error is about E_kin * (2 pi / ppw)^4 / 800; refine
  // the step when the fixed density would miss target_abs_error.
  double ppw = opts.points_per_wavelength;
  if (opts.target_abs_error > 0.0) {
    const double theta = std::pow(800.0 * opts.target_abs_error / (eps_top - vmin), 0.25);
    ppw = std::max(ppw, 2.0 * std::numbers::pi / theta);
  }
  const double h0 = wavelength / ppw;
  auto intervals = static_cast<std::size_t>(std::ceil(q_max / h0));
  intervals = std::max<std::size_t>(intervals, 200);
  // Keep the Numerov coupling bounded in the far tail.
  const double v_edge = potential_value(spec, q_max) - eps_lo;
  const double h_stable = std::sqrt(kMaxNumerovCoupling * 12.0 * hbar * hbar / (2.0 * std::max(v_edge, 1e-300)));
  intervals = std::max(intervals, static_cast<std::size_t>(std::ceil(q_max / h_stable)));
  return {q_max, intervals};
}

// Solves every requested parity-index of one parity on a fixed problem.
class ParitySolver {
 public:
  ParitySolver(const HalfLineProblem& problem, const PotentialSpec& spec, Parity parity, double hbar,
               double rel_tol)
      : problem_(problem), spec_(spec), parity_(parity), hbar_(hbar), rel_tol_(rel_tol) {}

  int count(double e) {
    auto it = counts_.find(e);
    if (it != counts_.end()) return it->second;
    const int c = problem_.count_below(e, parity_);
    counts_.emplace(e, c);
    return c;
  }

  // Bracket [lo, hi] with count(lo) == k and count(hi) == k + 1.
  std::pair<double, double> isolate(int k) {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (const auto& [e, c] : counts_) {
      if (c <= k) lo = std::max(lo, e);
      if (c >= k + 1) hi = std::min(hi, e);
    }
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw Error("eigenvalue bracket not established");
    for (int it = 0; it < 200; ++it) {
      if (count(lo) == k && count(hi) == k + 1) return {lo, hi};
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (count(mid) <= k) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    throw AccuracyError("could not isolate eigenvalue by node counting", hi - lo);
  }

  // Refines eigenvalue k inside an isolating bracket; returns the energy.
  double refine(double lo, double hi) const {
    const double mid = 0.5 * (lo + hi);
    const std::size_t m = matching_index(mid);
    auto f = [&](double e) { return problem_.mismatch(e, parity_, m); };
    const double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) {
      throw AccuracyError("matching function does not change sign in the isolating bracket", hi - lo);
    }
    const double tol = rel_tol_ * std::max(std::abs(mid), hbar_);
    return brent_root(f, lo, hi, flo, fhi, tol);
  }

  std::size_t matching_index(double e) const {
    // Just inside the outer turning point, where |phi| has its outermost maximum.
    double q_t = outer_turning_point(spec_, std::max(e, potential_minimum(spec_)));
    const double wavelength_edge = std::pow(hbar_ * hbar_ / std::max(std::abs(potential_derivative(spec_, q_t)), 1e-300),
                                            1.0 / 3.0);
    q_t = std::max(0.0, q_t - wavelength_edge);
    const double h = problem_.step();
    auto m = static_cast<std::size_t>(std::llround(q_t / h));
    const std::size_t n = problem_.intervals();
    return std::clamp<std::size_t>(m, 2, n - 3);
  }

  Parity parity() const { return parity_; }

 private:
  const HalfLineProblem& problem_;
  PotentialSpec spec_;
  Parity parity_;
  double hbar_;
  double rel_tol_;
  std::map<double, int> counts_;
};

EigenState build_state(const HalfLineProblem& problem, const ParitySolver& solver, int k, double energy) {
  const std::size_t m = solver.matching_index(energy);
  std::vector<double> y = problem.eigenfunction(energy, solver.parity(), m);
  EigenState st;
  st.energy = energy;
  st.parity = solver.parity();
  const int half_nodes = sign_changes(y, 1);
  st.n = solver.parity() == Parity::Even ? 2 * half_nodes : 2 * half_nodes + 1;
  const int expected = solver.parity() == Parity::Even ? 2 * k : 2 * k + 1;
  if (st.n != expected) {
    std::ostringstream os;
    os << "node count " << st.n << " disagrees with eigenvalue index " << expected << " at energy " << energy;
    throw AccuracyError(os.str(), energy);
  }
  st.endpoint_amplitude = std::abs(y[y.size() - 2]);
  if (!(st.endpoint_amplitude < 1e-10)) {
    throw AccuracyError("eigenfunction tail has not decayed at the domain edge", st.endpoint_amplitude);
  }
  st.domain_max = problem.q_max();
  st.half_samples = std::move(y);
  st.grid.step = problem.step();
  st.grid.q_max = problem.q_max();
  st.grid.q_min = -problem.q_max();
  return st;
}

void truncate_samples(EigenState& st, double keep_to) {
  if (!std::isfinite(keep_to) || keep_to >= st.grid.q_max) return;
  const auto keep = static_cast<std::size_t>(std::floor(keep_to / st.grid.step)) + 1;
  if (keep >= st.half_samples.size()) return;
  st.half_samples.resize(keep);
  st.half_samples.shrink_to_fit();
  st.grid.q_max = static_cast<double>(keep - 1) * st.grid.step;
  st.grid.q_min = -st.grid.q_max;
}

template <class Fn>
std::vector<EigenState> run_tasks(std::size_t count, unsigned workers, Fn&& fn) {
  std::vector<EigenState> out(count);
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::future<void>> pending;
  std::atomic<std::size_t> next{0};
  for (unsigned w = 0; w < workers; ++w) {
    pending.push_back(std::async(std::launch::async, [&]() {
      for (std::size_t i = next++; i < count; i = next++) out[i] = fn(i);
    }));
  }
  for (auto& p : pending) p.get();
  return out;
}

}  // namespace

const char* to_string(Parity p) { return p == Parity::Even ? "even" : "odd"; }

std::size_t Grid::count() const {
  if (step <= 0.0) return 0;
  return static_cast<std::size_t>(std::llround((q_max - q_min) / step)) + 1;
}

double EigenState::sample(std::size_t j) const {
  const std::size_t half = half_samples.size() - 1;
  if (j >= half) return half_samples[j - half];
  const double v = half_samples[half - j];
  return parity == Parity::Even ? v : -v;
}

std::vector<double> EigenState::samples() const {
  std::vector<double> out(sample_count());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = sample(j);
  return out;
}

double eigen_index_estimate(const PotentialSpec& spec, double hbar, double eps) {
  if (!(hbar > 0.0)) throw DomainError("hbar must be positive");
  const double n = action_area(spec, eps) / (2.0 * std::numbers::pi * hbar) - 0.5;
  return std::max(0.0, n);
}

SpectralWindow solve_eigen_window(const PotentialSpec& spec, double hbar, double eps_min, double eps_max,
                                  ParityFilter filter, const SolveOptions& opts) {
  if (!(hbar > 0.0)) throw DomainError("hbar must be positive");
  if (!(eps_min < eps_max)) throw DomainError("empty energy window");
  SpectralWindow window;
  window.spec = spec;
  window.hbar = hbar;
  window.eps_min = eps_min;
  window.eps_max = eps_max;
  const double vmin = potential_minimum(spec);
  if (eps_max <= vmin) return window;
  const double lo_energy = std::max(eps_min, vmin);

  const DomainChoice dom = choose_domain(spec, hbar, lo_energy, eps_max, opts);
  const HalfLineProblem problem(spec, hbar, dom.q_max, dom.intervals);

  std::vector<Parity> parities;
  if (filter != ParityFilter::Odd) parities.push_back(Parity::Even);
  if (filter != ParityFilter::Even) parities.push_back(Parity::Odd);

  const unsigned workers = opts.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opts.workers;

  for (Parity parity : parities) {
    ParitySolver solver(problem, spec, parity, hbar, opts.rel_tol);
    const int k_lo = solver.count(lo_energy);
    const int k_hi = solver.count(eps_max);
    if (k_hi <= k_lo) continue;
    std::vector<std::pair<double, double>> brackets;
    for (int k = k_lo; k < k_hi; ++k) brackets.push_back(solver.isolate(k));
    auto states = run_tasks(brackets.size(), workers, [&](std::size_t i) {
      const int k = k_lo + static_cast<int>(i);
      const double e = solver.refine(brackets[i].first, brackets[i].second);
      return build_state(problem, solver, k, e);
    });

    // Parity-ladder continuity: node counts step by exactly 2.
    for (std::size_t i = 1; i < states.size(); ++i) {
      if (states[i].n - states[i - 1].n != 2) {
        throw AccuracyError("missing state in the parity ladder", states[i].energy);
      }
    }

    if (opts.grid_check_states > 0) {
      const HalfLineProblem fine(spec, hbar, dom.q_max, 2 * dom.intervals);
      ParitySolver fine_solver(fine, spec, parity, hbar, opts.rel_tol);
      const std::size_t count = states.size();
      const auto picks = static_cast<std::size_t>(std::min<int>(opts.grid_check_states, static_cast<int>(count)));
      for (std::size_t j = 0; j < picks; ++j) {
        const std::size_t idx = picks == 1 ? count - 1 : j * (count - 1) / (picks - 1);
        const EigenState& st = states[idx];
        const int k = parity == Parity::Even ? st.n / 2 : (st.n - 1) / 2;
        // Seed the fine solver with a bracket around the coarse energy.
        const double spacing = std::max(hbar * 1e-3, 1e-6 * std::abs(st.energy));
        double lo = st.energy - spacing;
        double hi = st.energy + spacing;
        for (int grow = 0; grow < 60 && fine_solver.count(lo) > k; ++grow) lo -= (hi - lo);
        for (int grow = 0; grow < 60 && fine_solver.count(hi) < k + 1; ++grow) hi += (hi - lo);
        const auto br = fine_solver.isolate(k);
        const double e_fine = fine_solver.refine(br.first, br.second);
        const double change = std::abs(e_fine - st.energy);
        window.grid_check_change = std::max(window.grid_check_change, change);
        if (change > opts.grid_check_tol * std::max(1.0, std::abs(st.energy))) {
          std::ostringstream os;
          os << "halving the Numerov step moved eigenvalue n=" << st.n << " by " << change
             << "; increase points_per_wavelength";
          throw AccuracyError(os.str(), change);
        }
      }
    }

    for (auto& st : states) {
      truncate_samples(st, opts.keep_samples_to);
      window.states.push_back(std::move(st));
    }
  }
  std::sort(window.states.begin(), window.states.end(),
            [](const EigenState& a, const EigenState& b) { return a.energy < b.energy; });
  return window;
}

namespace {

linalg::SymTridiagonal finite_difference_matrix(const PotentialSpec& spec, double hbar, double q_max,
                                                std::size_t grid_points) {
  if (grid_points < 200) throw DomainError("dense oracle needs at least 200 grid points");
  const double h = 2.0 * q_max / static_cast<double>(grid_points + 1);
  const double kinetic = hbar * hbar / (2.0 * h * h);
  linalg::SymTridiagonal m;
  m.diag.resize(grid_points);
  m.off.assign(grid_points - 1, -kinetic);
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double q = -q_max + h * static_cast<double>(i + 1);
    m.diag[i] = 2.0 * kinetic + potential_value(spec, q);
  }
  return m;
}

}  // namespace

std::vector<double> dense_oracle(const PotentialSpec& spec, double hbar, double q_max, std::size_t grid_points,
                                 std::size_t k) {
  if (k == 0 || k * 4 > grid_points) throw DomainError("dense oracle: k out of range");
  const auto m = finite_difference_matrix(spec, hbar, q_max, grid_points);
  return linalg::eigenvalues_by_index(m, 0, k - 1);
}

std::vector<double> dense_oracle_richardson(const PotentialSpec& spec, double hbar, double q_max,
                                            std::size_t grid_points, std::size_t first, std::size_t last) {
  if (first > last || (last + 1) * 4 > grid_points) throw DomainError("dense oracle: index range out of range");
  const auto coarse_m = finite_difference_matrix(spec, hbar, q_max, grid_points);
  const auto fine_m = finite_difference_matrix(spec, hbar, q_max, 2 * grid_points + 1);
  const auto coarse = linalg::eigenvalues_by_index(coarse_m, first, last);
  const auto fine = linalg::eigenvalues_by_index(fine_m, first, last);
  std::vector<double> out(coarse.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
  return out;
}

}  // namespace qbreak

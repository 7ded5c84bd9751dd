#include "qbreak/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "qbreak/errors.hpp"

namespace qbreak::quad {
namespace {

// Kronrod abscissae (positive half, descending) and weights for K15, with the
// embedded 7-point Gauss weights on the odd-indexed nodes.
constexpr std::array<double, 8> kXk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const Integrand& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = fc * kWk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXk[j];
    const double s = f(c - dx) + f(c + dx);
    kron += kWk[j] * s;
    if (j % 2 == 1) gauss += kWg[j / 2] * s;
  }
  kron *= h;
  gauss *= h;
  // The G7 result is far less accurate than K15, so |K15 - G7| overestimates
  // the error of the returned value.
  const double err = std::max(std::abs(kron - gauss),
                              50.0 * std::numeric_limits<double>::epsilon() * std::abs(kron));
  return {a, b, kron, err};
}

}  // namespace

QuadResult integrate(const Integrand& f, double a, double b, const QuadOptions& opts) {
  QuadResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::priority_queue<Segment> heap;
  // Start from a few panels so narrow features near the ends are sampled.
  constexpr int kInitial = 4;
  double total = 0.0, total_err = 0.0;
  for (int i = 0; i < kInitial; ++i) {
    const double lo = a + (b - a) * i / kInitial;
    const double hi = (i + 1 == kInitial) ? b : a + (b - a) * (i + 1) / kInitial;
    Segment s = gk15(f, lo, hi);
    total += s.value;
    total_err += s.error;
    heap.push(s);
  }
  int count = kInitial;
  while (total_err > std::max(opts.abs_tol, opts.rel_tol * std::abs(total)) &&
         count < opts.max_intervals) {
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= std::min(worst.a, worst.b) || mid >= std::max(worst.a, worst.b)) {
      heap.push(worst);
      break;  // interval cannot be split further in double precision
    }
    Segment left = gk15(f, worst.a, mid);
    Segment right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++count;
  }
  // Re-sum from the pieces to shed the drift of the running updates.
  std::vector<Segment> pieces;
  pieces.reserve(heap.size());
  while (!heap.empty()) {
    pieces.push_back(heap.top());
    heap.pop();
  }
  std::sort(pieces.begin(), pieces.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
  total = 0.0;
  total_err = 0.0;
  for (const auto& s : pieces) {
    total += s.value;
    total_err += s.error;
  }
  out.value = total;
  out.error = total_err;
  out.intervals = count;
  out.converged = total_err <= std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
  return out;
}

double integrate_or_throw(const Integrand& f, double a, double b, const QuadOptions& opts) {
  const QuadResult r = integrate(f, a, b, opts);
  if (!r.converged) {
    throw AccuracyError("adaptive quadrature did not converge",
                        r.error / std::max(std::abs(r.value), 1e-300));
  }
  return r.value;
}

QuadResult integrate_to_infinity(const Integrand& f, double a, const QuadOptions& opts) {
  auto mapped = [&](double t) {
    if (t >= 1.0) return 0.0;
    const double one_minus = 1.0 - t;
    const double x = a + t / one_minus;
    const double v = f(x);
    return v == 0.0 ? 0.0 : v / (one_minus * one_minus);
  };
  return integrate(mapped, 0.0, 1.0, opts);
}

QuadResult integrate_sqrt_endpoints(const Integrand& f, double a, double b, const QuadOptions& opts) {
  QuadResult out;
  if (!(b > a)) {
    out.converged = true;
    return out;
  }
  const double mid = 0.5 * (a + b);
  const double umax = std::sqrt(mid - a);
  // Left half: x = a + u^2, right half: x = b - u^2, dx = 2u du.
  auto left = [&](double u) { return u == 0.0 ? 0.0 : 2.0 * u * f(a + u * u); };
  auto right = [&](double u) { return u == 0.0 ? 0.0 : 2.0 * u * f(b - u * u); };
  const QuadResult l = integrate(left, 0.0, umax, opts);
  const QuadResult r = integrate(right, 0.0, std::sqrt(b - mid), opts);
  out.value = l.value + r.value;
  out.error = l.error + r.error;
  out.intervals = l.intervals + r.intervals;
  out.converged = l.converged && r.converged;
  return out;
}

}  // namespace qbreak::quad

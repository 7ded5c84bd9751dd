#include "qbreak/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qbreak/errors.hpp"

namespace qbreak::linalg {

std::size_t sturm_count(const SymTridiagonal& m, double x) {
  const std::size_t n = m.size();
  if (n == 0) return 0;
  constexpr double kPivMin = std::numeric_limits<double>::min() * 1e10;
  std::size_t negatives = 0;
  double d = m.diag[0] - x;
  if (std::abs(d) < kPivMin) d = -kPivMin;
  if (d < 0.0) ++negatives;
  for (std::size_t i = 1; i < n; ++i) {
    const double b = m.off[i - 1];
    d = (m.diag[i] - x) - b * b / d;
    if (std::abs(d) < kPivMin) d = -kPivMin;
    if (d < 0.0) ++negatives;
  }
  return negatives;
}

Bounds gershgorin_bounds(const SymTridiagonal& m) {
  const std::size_t n = m.size();
  Bounds b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(m.off[i - 1]);
    if (i + 1 < n) r += std::abs(m.off[i]);
    b.lo = std::min(b.lo, m.diag[i] - r);
    b.hi = std::max(b.hi, m.diag[i] + r);
  }
  return b;
}

std::vector<double> eigenvalues_by_index(const SymTridiagonal& m, std::size_t first, std::size_t last,
                                         double abs_tol) {
  const std::size_t n = m.size();
  if (n == 0 || first > last || last >= n) throw DomainError("eigenvalue index range out of bounds");
  if (m.off.size() + 1 != n) throw DomainError("malformed tridiagonal matrix");
  const Bounds g = gershgorin_bounds(m);
  const double norm = std::max(std::abs(g.lo), std::abs(g.hi));
  const double tol = abs_tol > 0.0 ? abs_tol : 4.0 * std::numeric_limits<double>::epsilon() * norm;

  std::vector<double> out;
  out.reserve(last - first + 1);
  double floor = g.lo;  // eigenvalue i >= eigenvalue i - 1
  for (std::size_t idx = first; idx <= last; ++idx) {
    double lo = floor;
    double hi = g.hi;
    // Invariant: count(lo) <= idx < count(hi).
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (sturm_count(m, mid) <= idx) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double value = 0.5 * (lo + hi);
    out.push_back(value);
    floor = lo;
  }
  return out;
}

}  // namespace qbreak::linalg

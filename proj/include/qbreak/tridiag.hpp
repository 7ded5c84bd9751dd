#pragma once

#include <cstddef>
#include <vector>

namespace qbreak::linalg {

// Real symmetric tridiagonal matrix: diag has n entries, off has n - 1.
struct SymTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;

  std::size_t size() const { return diag.size(); }
};

// Number of eigenvalues strictly below x (Sturm sequence via LDL^T pivots).
std::size_t sturm_count(const SymTridiagonal& m, double x);

// Gershgorin interval containing the whole spectrum.
struct Bounds {
  double lo, hi;
};
Bounds gershgorin_bounds(const SymTridiagonal& m);

// Eigenvalues with ascending indices first..last (0-based, inclusive),
// located by bisection to an absolute width of abs_tol (0 selects a
// tolerance near the machine limit for the matrix norm).
std::vector<double> eigenvalues_by_index(const SymTridiagonal& m, std::size_t first, std::size_t last,
                                         double abs_tol = 0.0);

}  // namespace qbreak::linalg

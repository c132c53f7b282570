#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "toa/errors.hpp"

namespace toa::detail {

/// Symmetric tridiagonal matrix; off has one fewer entry than diag.
struct SymTridiag {
  std::vector<double> diag;
  std::vector<double> off;
};

struct EigenPair {
  double value = 0.0;
  std::vector<double> vector;  // unit 2-norm
  double residual = 0.0;       // ||H v - theta v|| / |theta|
};

// Number of eigenvalues strictly below x (Sturm sequence via the standard
// LDL^T pivot recurrence with an underflow guard).
inline std::size_t sturm_count(const SymTridiag& m, double x) {
  const std::size_t n = m.diag.size();
  std::size_t count = 0;
  double d = 1.0;
  const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
  for (std::size_t i = 0; i < n; ++i) {
    const double offsq = i == 0 ? 0.0 : m.off[i - 1] * m.off[i - 1];
    d = m.diag[i] - x - offsq / d;
    if (d == 0.0) d = tiny;
    if (d < 0.0) ++count;
  }
  return count;
}

// Solves (H - shift) y = rhs in place (Thomas algorithm). Valid when
// H - shift is positive definite, which holds for any shift below the
// smallest eigenvalue.
inline void shifted_solve(const SymTridiag& m, double shift, std::vector<double>& y,
                          std::vector<double>& scratch) {
  const std::size_t n = m.diag.size();
  scratch.resize(n);
  double piv = m.diag[0] - shift;
  scratch[0] = piv;
  for (std::size_t i = 1; i < n; ++i) {
    const double l = m.off[i - 1] / scratch[i - 1];
    y[i] -= l * y[i - 1];
    scratch[i] = m.diag[i] - shift - l * m.off[i - 1];
  }
  y[n - 1] /= scratch[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) y[i] = (y[i] - m.off[i] * y[i + 1]) / scratch[i];
}

/// Smallest eigenpair: Sturm bisection brackets the lowest eigenvalue, then
/// inverse iteration from a shift just below it refines the vector; the
/// Rayleigh quotient supplies the final eigenvalue. `warm` optionally seeds
/// the iteration vector.
inline EigenPair smallest_eigenpair(const SymTridiag& m,
                                    const std::vector<double>* warm = nullptr,
                                    double residual_tol = 1e-12, std::size_t max_iter = 40) {
  const std::size_t n = m.diag.size();
  if (n == 0) throw validation_error("smallest_eigenpair: empty matrix");
  if (m.off.size() + 1 != n) throw validation_error("smallest_eigenpair: bad off length");

  double max_off = 0.0;
  for (double e : m.off) max_off = std::max(max_off, std::abs(e));
  double hi = *std::min_element(m.diag.begin(), m.diag.end());
  double lo = hi - 2.0 * max_off;
  while (sturm_count(m, lo) > 0) lo -= 2.0 * (hi - lo + 1.0);

  const double span = std::max({std::abs(lo), std::abs(hi), 1.0});
  while (hi - lo > 1e-14 * span) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (sturm_count(m, mid) == 0)
      lo = mid;
    else
      hi = mid;
  }
  const double shift = lo;  // strictly below the smallest eigenvalue

  std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  if (warm && warm->size() == n) v = *warm;
  std::vector<double> scratch;
  double theta = hi;
  double residual = std::numeric_limits<double>::infinity();
  double prev_residual = residual;
  for (std::size_t it = 0; it < max_iter; ++it) {
    shifted_solve(m, shift, v, scratch);
    double nrm = 0.0;
    for (double c : v) nrm += c * c;
    nrm = std::sqrt(nrm);
    for (double& c : v) c /= nrm;

    // Rayleigh quotient and residual
    theta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double hv = m.diag[i] * v[i];
      if (i > 0) hv += m.off[i - 1] * v[i - 1];
      if (i + 1 < n) hv += m.off[i] * v[i + 1];
      theta += v[i] * hv;
    }
    double rn = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double hv = m.diag[i] * v[i];
      if (i > 0) hv += m.off[i - 1] * v[i - 1];
      if (i + 1 < n) hv += m.off[i] * v[i + 1];
      const double r = hv - theta * v[i];
      rn += r * r;
    }
    residual = std::sqrt(rn) / std::max(std::abs(theta), 1e-300);
    if (residual < residual_tol) break;
    if (residual > 0.5 * prev_residual) break;  // roundoff floor reached
    prev_residual = residual;
  }
  return EigenPair{theta, std::move(v), residual};
}

}  // namespace toa::detail

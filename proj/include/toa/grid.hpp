#pragma once

#include <cstddef>
#include <numbers>
#include <vector>

#include "toa/errors.hpp"
#include "toa/fft.hpp"

namespace toa {

/// Uniform spatial lattice together with its conjugate momentum lattice.
///
/// Node i sits at x_min + i*dx. The momentum lattice is stored in FFT bin
/// order: momenta[j] = 2*pi*hbar/(n*dx) * j for j < n/2, and the negative
/// branch (j - n) above, so momenta[j] pairs with the j-th transform bin.
/// It is symmetric about zero except for the single unpaired Nyquist mode.
struct Grid {
  double x_min = 0.0;
  double x_max = 0.0;
  std::size_t n = 0;
  double dx = 0.0;
  double hbar = 1.0;
  std::vector<double> momenta;

  double dp() const { return 2.0 * std::numbers::pi * hbar / (static_cast<double>(n) * dx); }
  double node(std::size_t i) const { return x_min + static_cast<double>(i) * dx; }
  bool contains(double x) const { return x >= x_min && x <= x_max; }
};

/// Builds a Grid. n must be a power of two >= 16 (the spectral transform is
/// plain radix-2) and x_max > x_min.
inline Grid make_grid(double x_min, double x_max, std::size_t n, double hbar = 1.0) {
  if (!(x_max > x_min)) throw validation_error("make_grid: x_max must exceed x_min");
  if (n < 16 || !detail::is_power_of_two(n))
    throw validation_error("make_grid: n must be a power of two >= 16");
  if (!(hbar > 0.0)) throw validation_error("make_grid: hbar must be > 0");

  Grid g;
  g.x_min = x_min;
  g.x_max = x_max;
  g.n = n;
  g.dx = (x_max - x_min) / static_cast<double>(n);
  g.hbar = hbar;
  g.momenta.resize(n);
  const double dp = g.dp();
  const auto half = static_cast<std::ptrdiff_t>(n / 2);
  for (std::size_t j = 0; j < n; ++j) {
    const auto sj = static_cast<std::ptrdiff_t>(j);
    g.momenta[j] = dp * static_cast<double>(sj < half ? sj : sj - static_cast<std::ptrdiff_t>(n));
  }
  return g;
}

inline bool same_grid(const Grid& a, const Grid& b) {
  return a.x_min == b.x_min && a.x_max == b.x_max && a.n == b.n && a.hbar == b.hbar;
}

}  // namespace toa

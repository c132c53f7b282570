#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "toa/constants.hpp"
#include "toa/errors.hpp"
#include "toa/fft.hpp"
#include "toa/grid.hpp"

namespace toa {

/// Complex amplitudes on a Grid at one parametric time. Amplitudes carry
/// units of 1/sqrt(length); norm_squared approximates the continuum integral
/// of |psi|^2. The time field is bookkeeping updated by the propagators;
/// arrival-time lattices are always measured relative to the state itself.
struct WaveFunction {
  Grid grid;
  std::vector<std::complex<double>> amps;
  double time = 0.0;
};

enum class Observable { position, momentum, kinetic_energy, position_variance };

inline void validate(const WaveFunction& psi) {
  if (psi.amps.size() != psi.grid.n)
    throw validation_error("WaveFunction: amps length must equal grid.n");
  if (psi.grid.n == 0) throw validation_error("WaveFunction: empty grid");
}

inline double norm_squared(const WaveFunction& psi) {
  validate(psi);
  double s = 0.0;
  for (const auto& a : psi.amps) s += std::norm(a);
  return s * psi.grid.dx;
}

inline double momentum_norm_squared(const Grid& grid, std::span<const std::complex<double>> phi) {
  double s = 0.0;
  for (const auto& a : phi) s += std::norm(a);
  return s * grid.dp();
}

/// Unitary transform to the momentum view:
///   phi(p_j) = (2*pi*hbar)^(-1/2) * sum_i psi(x_i) exp(-i p_j x_i / hbar) * dx
/// so that sum |phi|^2 dp = sum |psi|^2 dx exactly (Parseval on the lattice).
inline std::vector<std::complex<double>> to_momentum(const WaveFunction& psi) {
  validate(psi);
  const Grid& g = psi.grid;
  std::vector<std::complex<double>> phi = psi.amps;
  detail::fft(phi, false);
  const double scale = g.dx / std::sqrt(2.0 * std::numbers::pi * g.hbar);
  for (std::size_t j = 0; j < g.n; ++j)
    phi[j] *= scale * std::polar(1.0, -g.momenta[j] * g.x_min / g.hbar);
  return phi;
}

/// Inverse of to_momentum.
inline WaveFunction from_momentum(const Grid& grid, std::span<const std::complex<double>> phi,
                                  double time = 0.0) {
  if (phi.size() != grid.n)
    throw validation_error("from_momentum: phi length must equal grid.n");
  WaveFunction psi{grid, std::vector<std::complex<double>>(grid.n), time};
  for (std::size_t j = 0; j < grid.n; ++j)
    psi.amps[j] = phi[j] * std::polar(1.0, grid.momenta[j] * grid.x_min / grid.hbar);
  detail::fft(psi.amps, true);
  const double scale = std::sqrt(2.0 * std::numbers::pi * grid.hbar) / grid.dx;
  for (auto& a : psi.amps) a *= scale;
  return psi;
}

namespace detail {

inline void require_normalized(const WaveFunction& psi) {
  const double n2 = norm_squared(psi);
  if (std::abs(n2 - 1.0) > 1e-8)
    throw validation_error("expectation: state is not normalized (norm^2 = " +
                           std::to_string(n2) + ")");
}

}  // namespace detail

/// Expectation value of a basic observable. Position statistics are read in
/// the position view, momentum statistics in the momentum view; the kinetic
/// energy is sum p^2/(2m) |phi|^2 dp.
inline double expectation(const WaveFunction& psi, Observable obs,
                          const PhysicalConstants& pc = {}) {
  detail::require_normalized(psi);
  const Grid& g = psi.grid;
  switch (obs) {
    case Observable::position: {
      double s = 0.0;
      for (std::size_t i = 0; i < g.n; ++i) s += g.node(i) * std::norm(psi.amps[i]);
      return s * g.dx;
    }
    case Observable::position_variance: {
      double mean = 0.0;
      for (std::size_t i = 0; i < g.n; ++i) mean += g.node(i) * std::norm(psi.amps[i]);
      mean *= g.dx;
      double s = 0.0;
      for (std::size_t i = 0; i < g.n; ++i) {
        const double d = g.node(i) - mean;
        s += d * d * std::norm(psi.amps[i]);
      }
      return s * g.dx;
    }
    case Observable::momentum: {
      const auto phi = to_momentum(psi);
      double s = 0.0;
      for (std::size_t j = 0; j < g.n; ++j) s += g.momenta[j] * std::norm(phi[j]);
      return s * g.dp();
    }
    case Observable::kinetic_energy: {
      validate(pc);
      if (pc.hbar != g.hbar)
        throw validation_error("expectation: constants.hbar differs from grid.hbar");
      const auto phi = to_momentum(psi);
      double s = 0.0;
      for (std::size_t j = 0; j < g.n; ++j)
        s += g.momenta[j] * g.momenta[j] * std::norm(phi[j]);
      return s * g.dp() / (2.0 * pc.mass);
    }
  }
  throw validation_error("expectation: unknown observable");
}

}  // namespace toa

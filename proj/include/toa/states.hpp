#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "toa/constants.hpp"
#include "toa/errors.hpp"
#include "toa/grid.hpp"
#include "toa/wavefunction.hpp"

namespace toa {

/// Minimum position-momentum uncertainty Gaussian:
/// psi(x) ~ exp(-(x-x0)^2/(4 sigma_q^2) + i p0 x / hbar), so <(q-x0)^2> = sigma_q^2.
struct GaussianSpec {
  double x0 = 0.0;
  double p0 = 0.0;
  double sigma_q = 1.0;
};

enum class Branch : int { plus = +1, minus = -1 };

inline int sign_of(Branch b) { return static_cast<int>(b); }

/// One-sided crossing overlap <u_alpha|psi>; |value|^2 is a probability
/// density in time. branch selects right (+) or left (-) movers at `point`.
struct CrossingAmplitude {
  std::complex<double> value;
  Branch branch = Branch::plus;
  double point = 0.0;
};

inline WaveFunction gaussian(const GaussianSpec& spec, const Grid& grid) {
  if (!(spec.sigma_q > 0.0)) throw validation_error("gaussian: sigma_q must be > 0");
  WaveFunction psi{grid, std::vector<std::complex<double>>(grid.n), 0.0};
  double max_abs = 0.0;
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.node(i);
    const double d = x - spec.x0;
    const double envelope = std::exp(-d * d / (4.0 * spec.sigma_q * spec.sigma_q));
    psi.amps[i] = std::polar(envelope, spec.p0 * x / grid.hbar);
    max_abs = std::max(max_abs, envelope);
  }
  const double edge = std::max(std::abs(psi.amps.front()), std::abs(psi.amps.back()));
  if (!(edge < 1e-10 * max_abs))
    throw validation_error("gaussian: packet leaks off the grid edges; enlarge the domain");
  const double n2 = norm_squared(psi);
  const double scale = 1.0 / std::sqrt(n2);
  for (auto& a : psi.amps) a *= scale;
  return psi;
}

/// Crossing amplitude from a momentum view:
///   chi = (2*pi*hbar)^(-1/2) * sum_{alpha*p_j > 0} sqrt(|p_j|/m) e^{i p_j X/hbar} phi_j dp
/// Evaluated as a direct sum over the momentum lattice so X need not be a
/// grid node; the p = 0 node never contributes (the sqrt kernel vanishes).
/// Packets with appreciable weight near p = 0 need a finer momentum lattice
/// than the half-line quadrature can otherwise resolve.
inline CrossingAmplitude crossing_amplitude(const Grid& grid,
                                            std::span<const std::complex<double>> phi, double X,
                                            Branch alpha, const PhysicalConstants& pc = {}) {
  validate(pc);
  if (phi.size() != grid.n)
    throw validation_error("crossing_amplitude: phi length must equal grid.n");
  if (pc.hbar != grid.hbar)
    throw validation_error("crossing_amplitude: constants.hbar differs from grid.hbar");
  if (!grid.contains(X))
    throw validation_error("crossing_amplitude: X outside the grid domain");

  const double s = static_cast<double>(sign_of(alpha));
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t j = 0; j < grid.n; ++j) {
    const double p = grid.momenta[j];
    if (s * p <= 0.0) continue;
    acc += std::sqrt(std::abs(p) / pc.mass) * std::polar(1.0, p * X / grid.hbar) * phi[j];
  }
  acc *= grid.dp() / std::sqrt(2.0 * std::numbers::pi * grid.hbar);
  return CrossingAmplitude{acc, alpha, X};
}

inline CrossingAmplitude crossing_amplitude(const WaveFunction& psi, double X, Branch alpha,
                                            const PhysicalConstants& pc = {}) {
  const auto phi = to_momentum(psi);
  return crossing_amplitude(psi.grid, phi, X, alpha, pc);
}

}  // namespace toa

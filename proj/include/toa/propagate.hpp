#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "toa/constants.hpp"
#include "toa/errors.hpp"
#include "toa/fft.hpp"
#include "toa/grid.hpp"
#include "toa/potential.hpp"
#include "toa/wavefunction.hpp"

namespace toa {

struct EvolutionParams {
  double dt = 0.0;
  std::size_t steps = 0;
};

inline void validate(const EvolutionParams& p) {
  if (!(p.dt > 0.0)) throw validation_error("EvolutionParams: dt must be > 0");
  if (p.steps < 1) throw validation_error("EvolutionParams: steps must be >= 1");
}

/// Exact free evolution: multiply exp(-i p^2 T / (2 m hbar)) in the momentum
/// view. Negative duration evolves backward. Norm-preserving to roundoff.
inline WaveFunction evolve_free(const WaveFunction& psi, double duration,
                                const PhysicalConstants& pc = {}) {
  validate(psi);
  validate(pc);
  const Grid& g = psi.grid;
  if (pc.hbar != g.hbar)
    throw validation_error("evolve_free: constants.hbar differs from grid.hbar");
  WaveFunction out = psi;
  detail::fft(out.amps, false);
  const double c = duration / (2.0 * pc.mass * g.hbar);
  for (std::size_t j = 0; j < g.n; ++j) {
    const double p = g.momenta[j];
    out.amps[j] *= std::polar(1.0, -c * p * p);
  }
  detail::fft(out.amps, true);
  out.time += duration;
  return out;
}

/// Strang-split propagation engine: each step applies
///   exp(-i V dt / 2 hbar) exp(-i p^2 dt / 2 m hbar) exp(-i V dt / 2 hbar).
/// The half-step phases are deliberately not merged across steps so the state
/// after any integer number of steps is exactly the composition of whole
/// Strang steps, which is what the arrival sweeps sample. No renormalization
/// is ever applied. Wrap-around is monitored through the edge-cell
/// probability (must stay below 1e-8); a violation reports the step index.
class SplitStepper {
 public:
  SplitStepper(WaveFunction psi, const Potential& v, double dt, const PhysicalConstants& pc = {})
      : psi_(std::move(psi)), dt_(dt) {
    validate(psi_);
    validate(pc);
    if (!(dt > 0.0)) throw validation_error("SplitStepper: dt must be > 0");
    if (pc.hbar != psi_.grid.hbar)
      throw validation_error("SplitStepper: constants.hbar differs from grid.hbar");
    const Grid& g = psi_.grid;
    const auto v_nodes = sample_potential(v, g, pc);
    half_v_.resize(g.n);
    kinetic_.resize(g.n);
    for (std::size_t i = 0; i < g.n; ++i)
      half_v_[i] = std::polar(1.0, -0.5 * v_nodes[i] * dt / g.hbar);
    const double c = dt / (2.0 * pc.mass * g.hbar);
    for (std::size_t j = 0; j < g.n; ++j) {
      const double p = g.momenta[j];
      kinetic_[j] = std::polar(1.0, -c * p * p);
    }
    check_edges();
  }

  void advance(std::size_t steps) {
    auto& a = psi_.amps;
    const std::size_t n = a.size();
    for (std::size_t s = 0; s < steps; ++s) {
      for (std::size_t i = 0; i < n; ++i) a[i] *= half_v_[i];
      detail::fft(a, false);
      for (std::size_t j = 0; j < n; ++j) a[j] *= kinetic_[j];
      detail::fft(a, true);
      for (std::size_t i = 0; i < n; ++i) a[i] *= half_v_[i];
      ++steps_taken_;
      psi_.time += dt_;
      check_edges();
    }
  }

  const WaveFunction& state() const { return psi_; }
  std::size_t steps_taken() const { return steps_taken_; }

 private:
  void check_edges() const {
    const double edge_prob =
        (std::norm(psi_.amps.front()) + std::norm(psi_.amps.back())) * psi_.grid.dx;
    if (!(edge_prob < 1e-8))
      throw numerical_error("split-operator: edge-cell probability " +
                            std::to_string(edge_prob) + " exceeds 1e-8 at step " +
                            std::to_string(steps_taken_) + "; enlarge the domain");
  }

  WaveFunction psi_;
  std::vector<std::complex<double>> half_v_;
  std::vector<std::complex<double>> kinetic_;
  double dt_;
  std::size_t steps_taken_ = 0;
};

inline WaveFunction evolve_potential(const WaveFunction& psi, const Potential& v,
                                     const EvolutionParams& params,
                                     const PhysicalConstants& pc = {}) {
  validate(params);
  SplitStepper stepper(psi, v, params.dt, pc);
  stepper.advance(params.steps);
  return stepper.state();
}

namespace detail {

// Four-point Lagrange (cubic) interpolation at x; stencil clamped inside the
// grid. Values may be any per-node complex field.
inline std::complex<double> interp_cubic(const Grid& g, std::span<const std::complex<double>> f,
                                         double x) {
  const double u = (x - g.x_min) / g.dx;
  auto i1 = static_cast<std::ptrdiff_t>(std::floor(u));
  i1 = std::max<std::ptrdiff_t>(1, std::min<std::ptrdiff_t>(i1, static_cast<std::ptrdiff_t>(g.n) - 3));
  const std::ptrdiff_t i0 = i1 - 1;
  std::complex<double> acc{0.0, 0.0};
  for (std::ptrdiff_t a = 0; a < 4; ++a) {
    double w = 1.0;
    for (std::ptrdiff_t b = 0; b < 4; ++b) {
      if (a == b) continue;
      w *= (u - static_cast<double>(i0 + b)) / static_cast<double>(a - b);
    }
    acc += w * f[static_cast<std::size_t>(i0 + a)];
  }
  return acc;
}

// Spectral derivative d psi / dx. The Nyquist bin is zeroed so the derivative
// of real data stays real.
inline std::vector<std::complex<double>> spectral_derivative(const WaveFunction& psi) {
  const Grid& g = psi.grid;
  std::vector<std::complex<double>> d = psi.amps;
  fft(d, false);
  const std::complex<double> iunit{0.0, 1.0};
  for (std::size_t j = 0; j < g.n; ++j) d[j] *= iunit * g.momenta[j] / g.hbar;
  d[g.n / 2] = 0.0;
  fft(d, true);
  return d;
}

}  // namespace detail

/// Probability current density J(X) = (hbar/m) Im[psi*(X) dpsi/dx(X)], with a
/// spectral derivative and local cubic interpolation of psi and psi' at X.
inline double current_density(const WaveFunction& psi, double X, const PhysicalConstants& pc = {}) {
  validate(psi);
  validate(pc);
  if (!psi.grid.contains(X))
    throw validation_error("current_density: X outside the grid domain");
  if (pc.hbar != psi.grid.hbar)
    throw validation_error("current_density: constants.hbar differs from grid.hbar");
  const auto dpsi = detail::spectral_derivative(psi);
  const std::complex<double> at = detail::interp_cubic(psi.grid, psi.amps, X);
  const std::complex<double> dat = detail::interp_cubic(psi.grid, dpsi, X);
  return psi.grid.hbar / pc.mass * std::imag(std::conj(at) * dat);
}

}  // namespace toa

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "toa/constants.hpp"
#include "toa/detail/tridiag.hpp"
#include "toa/errors.hpp"
#include "toa/states.hpp"
#include "toa/wavefunction.hpp"

namespace toa {

/// Real profile eta_0(E) on a uniform energy lattice starting at E = 0.
/// values[0] is pinned to zero (the finite-second-moment boundary condition)
/// and the profile must have decayed well before the last node.
struct EtaProfile {
  std::vector<double> energies;
  std::vector<double> values;
  double dE = 0.0;
};

inline void validate(const EtaProfile& eta) {
  if (eta.values.size() < 3 || eta.values.size() != eta.energies.size())
    throw validation_error("EtaProfile: need >= 3 matching samples");
  if (!(eta.dE > 0.0)) throw validation_error("EtaProfile: dE must be > 0");
}

/// Dilates the energy axis by `scale` (unit norm preserved); realizes
/// eta(E; E0; eps) = g(E/eps; E0/eps) from the eps = 1 solution g.
inline EtaProfile dilate(const EtaProfile& eta, double scale) {
  validate(eta);
  if (!(scale > 0.0)) throw validation_error("dilate: scale must be > 0");
  EtaProfile out = eta;
  out.dE *= scale;
  const double amp = 1.0 / std::sqrt(scale);
  for (auto& e : out.energies) e *= scale;
  for (auto& v : out.values) v *= amp;
  return out;
}

/// Second moment of |chi(t)|^2 about t0 (ratio of trapezoid sums). The
/// window must capture the amplitude: |chi|^2 at the edges has to be below
/// 1e-8 of its peak.
inline double tau_squared(const std::vector<double>& times,
                          const std::vector<std::complex<double>>& chi, double t0) {
  if (times.size() != chi.size() || times.size() < 3)
    throw validation_error("tau_squared: need >= 3 matching samples");
  std::vector<double> w(chi.size());
  double peak = 0.0;
  for (std::size_t k = 0; k < chi.size(); ++k) {
    w[k] = std::norm(chi[k]);
    peak = std::max(peak, w[k]);
  }
  if (!(peak > 0.0)) throw validation_error("tau_squared: zero-weight amplitude");
  if (w.front() > 1e-8 * peak || w.back() > 1e-8 * peak)
    throw validation_error("tau_squared: |chi|^2 has not decayed at the window edges");
  double total = 0.0, second = 0.0;
  for (std::size_t k = 0; k + 1 < chi.size(); ++k) {
    const double dt = times[k + 1] - times[k];
    const double d0 = times[k] - t0, d1 = times[k + 1] - t0;
    total += 0.5 * dt * (w[k] + w[k + 1]);
    second += 0.5 * dt * (w[k] * d0 * d0 + w[k + 1] * d1 * d1);
  }
  return second / total;
}

/// Second energy moment of |eta|^2 about E0 (ratio of trapezoid sums).
inline double epsilon_squared(const EtaProfile& eta, double E0) {
  validate(eta);
  double total = 0.0, second = 0.0;
  for (std::size_t k = 0; k + 1 < eta.values.size(); ++k) {
    const double w0 = eta.values[k] * eta.values[k];
    const double w1 = eta.values[k + 1] * eta.values[k + 1];
    const double d0 = eta.energies[k] - E0, d1 = eta.energies[k + 1] - E0;
    total += 0.5 * eta.dE * (w0 + w1);
    second += 0.5 * eta.dE * (w0 * d0 * d0 + w1 * d1 * d1);
  }
  if (!(total > 0.0)) throw validation_error("epsilon_squared: zero-weight profile");
  return second / total;
}

/// tau^2 from the energy side by partial integration:
///   tau^2 = hbar^2 int |d eta_0/dE|^2 dE / int |eta_0|^2 dE,
/// with a second-order central-difference derivative. Requires eta to vanish
/// at both ends of the lattice.
inline double tau_from_eta(const EtaProfile& eta, double hbar = 1.0) {
  validate(eta);
  double peak = 0.0;
  for (double v : eta.values) peak = std::max(peak, std::abs(v));
  if (!(peak > 0.0)) throw validation_error("tau_from_eta: zero profile");
  if (std::abs(eta.values.front()) > 1e-8 * peak || std::abs(eta.values.back()) > 1e-8 * peak)
    throw validation_error("tau_from_eta: eta must vanish at both lattice ends");
  const std::size_t n = eta.values.size();
  std::vector<double> d(n);
  d[0] = (-3.0 * eta.values[0] + 4.0 * eta.values[1] - eta.values[2]) / (2.0 * eta.dE);
  d[n - 1] = (3.0 * eta.values[n - 1] - 4.0 * eta.values[n - 2] + eta.values[n - 3]) / (2.0 * eta.dE);
  for (std::size_t k = 1; k + 1 < n; ++k)
    d[k] = (eta.values[k + 1] - eta.values[k - 1]) / (2.0 * eta.dE);
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    num += 0.5 * eta.dE * (d[k] * d[k] + d[k + 1] * d[k + 1]);
    den += 0.5 * eta.dE * (eta.values[k] * eta.values[k] + eta.values[k + 1] * eta.values[k + 1]);
  }
  return hbar * hbar * num / den;
}

struct MomentReport {
  double tau2 = 0.0;
  double eps2 = 0.0;
  double t0 = 0.0;
  double E0 = 0.0;
};

inline MomentReport moment_report(const std::vector<double>& times,
                                  const std::vector<std::complex<double>>& chi, double t0,
                                  const EtaProfile& eta, double E0) {
  return MomentReport{tau_squared(times, chi, t0), epsilon_squared(eta, E0), t0, E0};
}

/// Energy amplitude eta(E) of a state relative to the crossing state |u_alpha>
/// at X: eta(E) = e^{i p X/hbar} (m/2E)^{1/4} phi(p) with p = alpha sqrt(2mE).
/// phi is evaluated by direct quadrature so E need not map onto the momentum
/// lattice. For a packet fully inside the alpha branch, |eta|^2 dE carries
/// the full momentum weight; a norm deficit beyond 1e-4 reports a too-coarse
/// or too-short energy lattice.
struct EnergyAmplitude {
  std::vector<double> energies;
  std::vector<std::complex<double>> values;
  double dE = 0.0;
};

inline EnergyAmplitude energy_amplitude(const WaveFunction& psi0, double X, Branch alpha,
                                        double E_max, std::size_t nodes,
                                        const PhysicalConstants& pc = {}) {
  detail::require_normalized(psi0);
  validate(pc);
  const Grid& g = psi0.grid;
  if (pc.hbar != g.hbar)
    throw validation_error("energy_amplitude: constants.hbar differs from grid.hbar");
  if (!g.contains(X)) throw validation_error("energy_amplitude: X outside the grid domain");
  if (nodes < 16 || !(E_max > 0.0))
    throw validation_error("energy_amplitude: need E_max > 0 and nodes >= 16");

  EnergyAmplitude out;
  out.dE = E_max / static_cast<double>(nodes - 1);
  out.energies.resize(nodes);
  out.values.resize(nodes);
  const double s = static_cast<double>(sign_of(alpha));
  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * g.hbar);
  for (std::size_t k = 0; k < nodes; ++k) {
    const double E = static_cast<double>(k) * out.dE;
    out.energies[k] = E;
    if (k == 0) {
      out.values[0] = 0.0;  // sqrt(|p|) kernel vanishes at p = 0
      continue;
    }
    const double p = s * std::sqrt(2.0 * pc.mass * E);
    // phi(p) = (2 pi hbar)^(-1/2) sum_i psi_i e^{-i p x_i/hbar} dx
    const std::complex<double> step = std::polar(1.0, -p * g.dx / g.hbar);
    std::complex<double> phase = std::polar(1.0, -p * g.x_min / g.hbar);
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = 0; i < g.n; ++i) {
      acc += psi0.amps[i] * phase;
      phase *= step;
    }
    const std::complex<double> phi_p = acc * (norm * g.dx);
    out.values[k] =
        std::polar(1.0, p * X / g.hbar) * std::pow(pc.mass / (2.0 * E), 0.25) * phi_p;
  }

  // norm audit against the branch weight on the momentum lattice
  const auto phi = to_momentum(psi0);
  double branch_weight = 0.0;
  for (std::size_t j = 0; j < g.n; ++j)
    if (s * g.momenta[j] > 0.0) branch_weight += std::norm(phi[j]);
  branch_weight *= g.dp();
  double S = 0.0;
  for (std::size_t k = 0; k + 1 < nodes; ++k)
    S += 0.5 * out.dE * (std::norm(out.values[k]) + std::norm(out.values[k + 1]));
  if (std::abs(S - branch_weight) > 1e-4)
    throw numerical_error("energy_amplitude: norm deficit " + std::to_string(S - branch_weight) +
                          "; energy lattice too coarse or E_max too small");
  return out;
}

// ---------------------------------------------------------------------------
// Wigner's constrained variational problem
// ---------------------------------------------------------------------------

struct WignerOptions {
  std::size_t nodes = 8001;      // energy-lattice nodes (Dirichlet ends included)
  double hbar = 1.0;
  double subsidiary_tol = 1e-8;  // |eps^2 - 1| at convergence
  std::size_t max_newton = 50;
};

/// A solved minimum time-energy uncertainty state in eps = 1 units.
struct MinUncertaintyState {
  double ratio = 0.0;       // E0 / eps
  EtaProfile eta;
  double lambda_prime = 0.0;
  double tau = 0.0;
  double epsilon = 1.0;
  double mean_E = 0.0;
  std::size_t iterations = 0;
  double residual = 0.0;
};

namespace detail {

// Seeds for the Lagrange multiplier. Large ratio: the Gaussian limit
// lambda ~ hbar^2/4. Near the E = 0 wall (ratio -> -1) the state is pressed
// against the boundary by the slope 2*lambda*|E0|; matching the Airy
// ground-state mean <E> = 1.559 l with the subsidiary condition gives the
// scaling below.
inline double wigner_lambda_seed(double ratio, double hbar) {
  if (ratio < -0.3) {
    const double mean_e = (1.0 - ratio * ratio) / (2.0 * -ratio);
    const double l = mean_e / 1.5587;
    return hbar * hbar / (2.0 * -ratio * l * l * l);
  }
  return hbar * hbar * (0.25 + 2.0 * std::exp(-0.7 * std::max(ratio, 0.0)));
}

// E_max is a smooth function of the ratio alone so that sweeps see a
// discretization error that drifts smoothly (never jumps) along the curve.
inline double wigner_e_max(double ratio) {
  if (ratio < -0.3) {
    const double mean_e = (1.0 - ratio * ratio) / (2.0 * -ratio);
    return 16.0 * mean_e / 1.5587;
  }
  return std::max(ratio, 0.0) + 13.2;
}

struct EtaSolution {
  double theta = 0.0;  // eigenvalue tau^2 + lambda
  std::vector<double> values;  // full profile, zero Dirichlet ends, sum v^2 dE = 1
  double eps2 = 0.0;
  double residual = 0.0;
};

inline EtaSolution solve_eta_profile(double lambda, double E0, double e_max, std::size_t nodes,
                                     double hbar, const std::vector<double>* warm) {
  const double dE = e_max / static_cast<double>(nodes - 1);
  const std::size_t m = nodes - 2;
  const double k = hbar * hbar / (dE * dE);
  SymTridiag tri;
  tri.diag.resize(m);
  tri.off.assign(m - 1, -k);
  for (std::size_t i = 0; i < m; ++i) {
    const double d = static_cast<double>(i + 1) * dE - E0;
    tri.diag[i] = 2.0 * k + lambda * d * d;
  }
  EigenPair pair = smallest_eigenpair(tri, warm);

  EtaSolution sol;
  sol.theta = pair.value;
  sol.residual = pair.residual;
  sol.values.assign(nodes, 0.0);
  double mass_sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sol.values[i + 1] = pair.vector[i];
    mass_sum += pair.vector[i];
  }
  double nrm2 = 0.0;
  for (double v : sol.values) nrm2 += v * v;
  double scale = 1.0 / std::sqrt(nrm2 * dE);
  if (mass_sum < 0.0) scale = -scale;  // fix the overall sign: nodeless and nonnegative
  for (auto& v : sol.values) v *= scale;

  double eps2 = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    const double d = static_cast<double>(i) * dE - E0;
    eps2 += sol.values[i] * sol.values[i] * d * d;
  }
  sol.eps2 = eps2 * dE;
  return sol;
}

}  // namespace detail

/// Solves Wigner's constrained problem for one value of ratio = E0/eps in
/// eps = 1 units: find the Lagrange multiplier lambda' such that the lowest
/// Dirichlet eigenstate of
///   -hbar^2 eta'' + lambda' (E - E0)^2 eta = (tau^2 + lambda') eta,  eta(0) = 0
/// satisfies the subsidiary condition eps^2 = 1. Newton-Raphson on
/// f(lambda') = eps^2(lambda') - 1 with a centered-secant derivative and a
/// bracketed-bisection fallback; the eigenproblem itself is a symmetric
/// tridiagonal inverse iteration. tau^2 is the eigenvalue minus lambda'.
inline MinUncertaintyState minimize_uncertainty(double ratio, const WignerOptions& opts = {},
                                                std::optional<double> lambda_hint = std::nullopt) {
  if (!(ratio > -1.0))
    throw validation_error("minimize_uncertainty: ratio must exceed -1");
  if (opts.nodes < 64) throw validation_error("minimize_uncertainty: nodes must be >= 64");
  if (!(opts.hbar > 0.0)) throw validation_error("minimize_uncertainty: hbar must be > 0");

  const double E0 = ratio;
  const double hbar2 = opts.hbar * opts.hbar;
  double e_max = detail::wigner_e_max(ratio);
  double lambda = lambda_hint.value_or(detail::wigner_lambda_seed(ratio, opts.hbar));
  if (!(lambda > 0.0)) lambda = hbar2 * 0.25;

  for (int regrid = 0; regrid < 6; ++regrid) {
    const double dE = e_max / static_cast<double>(opts.nodes - 1);
    std::vector<double> warm;
    detail::EtaSolution sol;
    auto eval = [&](double lam) {
      sol = detail::solve_eta_profile(lam, E0, e_max, opts.nodes, opts.hbar, warm.empty() ? nullptr : &warm);
      warm.assign(sol.values.begin() + 1, sol.values.end() - 1);
      return sol.eps2 - 1.0;
    };

    // f is monotone decreasing in lambda: more confinement, smaller spread.
    double lo = 0.0, hi = 0.0;  // bracket: f(lo) > 0 > f(hi)
    bool have_lo = false, have_hi = false;
    auto record = [&](double lam, double f) {
      if (f > 0.0 && (!have_lo || lam > lo)) { lo = lam; have_lo = true; }
      if (f < 0.0 && (!have_hi || lam < hi)) { hi = lam; have_hi = true; }
    };

    std::size_t iterations = 0;
    bool converged = false;
    double f0 = 0.0;
    for (; iterations < opts.max_newton; ) {
      ++iterations;
      f0 = eval(lambda);
      record(lambda, f0);
      if (std::abs(f0) < opts.subsidiary_tol) { converged = true; break; }

      const double h = 1e-4 * lambda;
      const double fp = eval(lambda + h);
      record(lambda + h, fp);
      const double fm = eval(lambda - h);
      record(lambda - h, fm);
      const double deriv = (fp - fm) / (2.0 * h);

      double cand = deriv != 0.0 ? lambda - f0 / deriv : -1.0;
      bool ok = std::isfinite(cand) && cand > 0.0;
      if (ok && have_lo && have_hi && !(cand > std::min(lo, hi) && cand < std::max(lo, hi)))
        ok = false;
      if (!ok) {
        if (have_lo && have_hi)
          cand = std::sqrt(lo * hi);  // geometric bisection; lambda spans decades
        else if (f0 > 0.0)
          cand = lambda * 4.0;
        else
          cand = lambda * 0.25;
      }
      lambda = cand;
    }
    if (!converged) {
      if (!(have_lo && have_hi))
        throw numerical_error("minimize_uncertainty: Newton failed and no bracket found at ratio " +
                              std::to_string(ratio));
      throw numerical_error("minimize_uncertainty: no convergence after " +
                            std::to_string(opts.max_newton) + " iterations at ratio " +
                            std::to_string(ratio));
    }

    // Lattice audits: the profile must have decayed before E_max and must be
    // resolved by a healthy fraction of the nodes.
    double peak = 0.0;
    for (double v : sol.values) peak = std::max(peak, std::abs(v));
    const std::size_t tail_span = std::max<std::size_t>(2, opts.nodes / 50);
    double tail = 0.0;
    for (std::size_t i = opts.nodes - tail_span; i < opts.nodes; ++i)
      tail = std::max(tail, std::abs(sol.values[i]));
    if (tail > 1e-10 * peak) {
      e_max *= 1.6;
      continue;
    }
    std::size_t support = opts.nodes - 1;
    while (support > 1 && std::abs(sol.values[support]) < 1e-10 * peak) --support;
    if (support < opts.nodes / 64) {
      e_max = 12.0 * static_cast<double>(support) * dE;
      continue;
    }

    const double tau2 = sol.theta - lambda;
    if (!(tau2 > 0.0))
      throw numerical_error("minimize_uncertainty: nonpositive tau^2 at ratio " +
                            std::to_string(ratio));
    // ground state must be nodeless
    int flips = 0;
    double prev = 0.0;
    for (double v : sol.values) {
      if (std::abs(v) < 1e-12 * peak) continue;
      if (prev != 0.0 && v * prev < 0.0) ++flips;
      prev = v;
    }
    if (flips != 0)
      throw numerical_error("minimize_uncertainty: interior node in the ground profile");

    MinUncertaintyState st;
    st.ratio = ratio;
    st.lambda_prime = lambda;
    st.tau = std::sqrt(tau2);
    st.epsilon = std::sqrt(sol.eps2);
    st.iterations = iterations;
    st.residual = sol.residual;
    st.eta.dE = dE;
    st.eta.values = std::move(sol.values);
    st.eta.energies.resize(opts.nodes);
    for (std::size_t i = 0; i < opts.nodes; ++i)
      st.eta.energies[i] = static_cast<double>(i) * dE;
    double mean = 0.0;
    for (std::size_t i = 0; i < opts.nodes; ++i)
      mean += st.eta.energies[i] * st.eta.values[i] * st.eta.values[i];
    st.mean_E = mean * dE;
    return st;
  }
  throw numerical_error("minimize_uncertainty: energy lattice did not settle at ratio " +
                        std::to_string(ratio));
}

struct WignerCurveRow {
  double ratio = 0.0;
  double mean_E_over_eps = 0.0;
  double eps_tau = 0.0;
  double lambda_prime = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Sweeps ratio over a uniform lattice, reusing each converged lambda' as the
/// next row's starting point. Non-converged rows are flagged, never dropped.
inline std::vector<WignerCurveRow> wigner_curve(double ratio_min, double ratio_max,
                                                std::size_t steps,
                                                const WignerOptions& opts = {}) {
  if (!(ratio_min > -1.0)) throw validation_error("wigner_curve: ratio_min must exceed -1");
  if (steps < 1) throw validation_error("wigner_curve: steps must be >= 1");
  if (steps == 1) {
    if (ratio_max != ratio_min)
      throw validation_error("wigner_curve: steps == 1 requires ratio_min == ratio_max");
  } else if (!(ratio_max > ratio_min)) {
    throw validation_error("wigner_curve: ratio_max must exceed ratio_min");
  }

  std::vector<WignerCurveRow> rows;
  rows.reserve(steps);
  std::optional<double> hint;
  for (std::size_t i = 0; i < steps; ++i) {
    const double r = steps == 1 ? ratio_min
                                : ratio_min + (ratio_max - ratio_min) * static_cast<double>(i) /
                                      static_cast<double>(steps - 1);
    WignerCurveRow row;
    row.ratio = r;
    try {
      const MinUncertaintyState st = minimize_uncertainty(r, opts, hint);
      row.mean_E_over_eps = st.mean_E / st.epsilon;
      row.eps_tau = st.epsilon * st.tau;
      row.lambda_prime = st.lambda_prime;
      row.iterations = st.iterations;
      row.converged = true;
      hint = st.lambda_prime;
    } catch (const numerical_error&) {
      row.mean_E_over_eps = std::numeric_limits<double>::quiet_NaN();
      row.eps_tau = std::numeric_limits<double>::quiet_NaN();
      row.lambda_prime = std::numeric_limits<double>::quiet_NaN();
      row.converged = false;
      hint.reset();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace toa

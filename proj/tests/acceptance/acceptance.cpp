// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Numeric tolerances are pinned here, in code; timing limits are checked too.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "toa/toa.hpp"

#include "../oracles.hpp"

namespace fs = std::filesystem;
using namespace toa;

namespace {

const std::string kBin = TOA_BINARY_PATH;
const fs::path kConfigDir = TOA_CONFIG_DIR;

struct check_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(bool ok, const std::string& what) {
  if (!ok) throw check_failure(what);
}

int run_cli(const std::string& args) {
  const std::string cmd = kBin + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path work_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "toa_acceptance";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct Csv {
  std::vector<double> T, pi_plus, pi_minus, j;
};

Csv read_arrival_csv(const fs::path& p) {
  std::ifstream f(p);
  check(f.good(), "cannot open " + p.string());
  std::string line;
  std::getline(f, line);
  check(line == "T,pi_plus,pi_minus,j", "unexpected CSV header: " + line);
  Csv out;
  while (std::getline(f, line)) {
    double a, b, c, d;
    check(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &a, &b, &c, &d) == 4,
          "bad CSV row: " + line);
    out.T.push_back(a);
    out.pi_plus.push_back(b);
    out.pi_minus.push_back(c);
    out.j.push_back(d);
  }
  return out;
}

double trapz(const std::vector<double>& t, const std::vector<double>& v) {
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < v.size(); ++k)
    s += 0.5 * (t[k + 1] - t[k]) * (v[k] + v[k + 1]);
  return s;
}

// --------------------------------------------------------------------------

void criterion1_wigner_anchor() {
  const oracles::WignerRatioZero oracle;  // independent quadrature of the closed form
  check(std::abs(oracle.eps_tau - 1.5) < 1e-6, "oracle eps*tau is off its closed form");
  check(std::abs(oracle.mean_E - 0.921318) < 1e-5, "oracle <E> is off its closed form");

  const MinUncertaintyState st = minimize_uncertainty(0.0);
  const double eps_tau = st.epsilon * st.tau;
  const double mean = st.mean_E / st.epsilon;
  check(std::abs(eps_tau - oracle.eps_tau) < 1e-3,
        "eps*tau = " + std::to_string(eps_tau) + ", want 1.5 +/- 1e-3");
  check(std::abs(mean - oracle.mean_E) < 1e-3,
        "<E>/eps = " + std::to_string(mean) + ", want 0.92132 +/- 1e-3");
}

void criterion2_figure1_sweep() {
  const auto rows = wigner_curve(-0.99, 8.0, 200);
  check(rows.size() == 200, "sweep must have 200 rows");
  for (const auto& r : rows) {
    check(r.converged, "row at ratio " + std::to_string(r.ratio) + " did not converge");
    check(r.eps_tau > 0.5, "eps*tau <= hbar/2 at ratio " + std::to_string(r.ratio));
    check(r.eps_tau * r.mean_E_over_eps > 1.0,
          "tau <E> <= hbar at ratio " + std::to_string(r.ratio));
  }
  for (std::size_t i = 1; i < rows.size(); ++i) {
    check(rows[i].mean_E_over_eps > rows[i - 1].mean_E_over_eps,
          "<E>/eps not increasing at row " + std::to_string(i));
    check(rows[i].eps_tau < rows[i - 1].eps_tau,
          "eps*tau not strictly decreasing at row " + std::to_string(i));
  }
  check(rows.back().eps_tau < 0.525, "upper end not within 5% of hbar/2: eps*tau = " +
                                         std::to_string(rows.back().eps_tau));
}

void criterion3_low_energy_divergence() {
  const MinUncertaintyState st = minimize_uncertainty(-0.99);
  check(st.tau > 100.0, "tau = " + std::to_string(st.tau) + " at ratio -0.99, want > 100");
}

void criterion4_kijowski_normalization() {
  const Grid g = make_grid(-22.0, 42.0, 2048);
  const WaveFunction psi = gaussian({0.0, 10.0, 1.0}, g);
  const auto times = time_lattice(0.0, 2.0, 0.01);
  const auto s = kijowski_free(psi, 10.0, times);
  const double total = trapz(s.times, s.pi_plus) + trapz(s.times, s.pi_minus);
  check(std::abs(total - 1.0) < 1e-4, "total weight = " + std::to_string(total));
  std::size_t arg = 0;
  for (std::size_t k = 1; k < s.pi_plus.size(); ++k)
    if (s.pi_plus[k] > s.pi_plus[arg]) arg = k;
  check(std::abs(times[arg] - 1.0) <= 0.01 + 1e-12,
        "pi_plus peak at T = " + std::to_string(times[arg]) + ", want within one step of 1");
}

void criterion5_covariance() {
  const Grid g = make_grid(-22.0, 42.0, 2048);
  const WaveFunction psi = gaussian({0.0, 10.0, 1.0}, g);
  const auto base = kijowski_free(psi, 10.0, time_lattice(0.0, 2.0, 0.01));
  const WaveFunction pre = evolve_free(psi, 0.3);
  const auto shifted = kijowski_free(pre, 10.0, time_lattice(-0.3, 1.7, 0.01));
  double worst = 0.0;
  for (std::size_t k = 0; k < base.times.size(); ++k) {
    worst = std::max(worst, std::abs(shifted.pi_plus[k] - base.pi_plus[k]));
    worst = std::max(worst, std::abs(shifted.pi_minus[k] - base.pi_minus[k]));
  }
  check(worst < 1e-8, "covariance deviation " + std::to_string(worst));
}

void criterion6_figure2() {
  const fs::path out15a = work_dir() / "fig2_x15_a.csv";
  const fs::path out15b = work_dir() / "fig2_x15_b.csv";
  const fs::path out8 = work_dir() / "fig2_x8.csv";
  const std::string preset = (kConfigDir / "figure2.json").string();

  check(run_cli("figure2 --position 15 --config " + preset + " --out " + out15a.string()) == 0,
        "figure2 X=15 run failed");
  check(run_cli("figure2 --position 15 --config " + preset + " --out " + out15b.string()) == 0,
        "figure2 X=15 rerun failed");
  check(slurp(out15a) == slurp(out15b), "committed preset is not deterministic");
  check(run_cli("figure2 --position 8 --config " + preset + " --out " + out8.string()) == 0,
        "figure2 X=8 run failed");

  const Csv x15 = read_arrival_csv(out15a);
  double jmax = 0.0, dev = 0.0;
  for (std::size_t k = 0; k < x15.T.size(); ++k) {
    jmax = std::max(jmax, std::abs(x15.j[k]));
    dev = std::max(dev, std::abs(x15.pi_plus[k] - x15.j[k]));
  }
  check(jmax > 0.0, "X=15 current identically zero");
  check(dev / jmax <= 0.02, "X=15 sup|pi_plus - J|/sup|J| = " + std::to_string(dev / jmax) +
                                ", want <= 0.02");

  const Csv x8 = read_arrival_csv(out8);
  double jmin = 0.0;
  for (std::size_t k = 0; k < x8.T.size(); ++k) {
    jmin = std::min(jmin, x8.j[k]);
    check(x8.pi_plus[k] >= 0.0, "pi_plus negative at X=8");
  }
  check(jmin < 0.0, "J never negative at X=8 (reflected flux missing)");
}

void criterion7_reduction_identity() {
  const Grid g = make_grid(-22.0, 42.0, 2048);
  const WaveFunction psi = gaussian({0.0, 10.0, 1.0}, g);
  const auto times = time_lattice(0.0, 2.0, 0.01);
  const auto free_series = kijowski_free(psi, 10.0, times);
  const auto general = arrival_general(psi, FreePotential{}, 10.0, times, {1e-3, 2000});
  double worst = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    worst = std::max(worst, std::abs(general.pi_plus[k] - free_series.pi_plus[k]));
    worst = std::max(worst, std::abs(general.pi_minus[k] - free_series.pi_minus[k]));
  }
  check(worst < 1e-8, "free-reduction deviation " + std::to_string(worst));
}

void criterion8_propagator_quality() {
  // (a) second-order self-convergence on the figure-2 physics
  const PhysicalConstants pc{1.0, 0.5};
  {
    const Grid g = make_grid(-20.0, 60.0, 4096);
    const WaveFunction psi0 = gaussian({5.0, 5.0, 1.0}, g);
    const Potential barrier = SquareBarrier{40.0, 12.0, 12.5};
    const double T = 1.2;
    auto run = [&](double dt) {
      const auto steps = static_cast<std::size_t>(std::round(T / dt));
      return evolve_potential(psi0, barrier, {T / double(steps), steps}, pc);
    };
    const WaveFunction ref = run(1.25e-4);
    auto sup = [&](const WaveFunction& a) {
      double m = 0.0;
      for (std::size_t i = 0; i < a.amps.size(); ++i)
        m = std::max(m, std::abs(a.amps[i] - ref.amps[i]));
      return m;
    };
    const double e8 = sup(run(8e-3)), e4 = sup(run(4e-3)), e2 = sup(run(2e-3));
    const double order_a = std::log2(e8 / e4), order_b = std::log2(e4 / e2);
    check(order_a > 1.8 && order_a < 2.2,
          "convergence order " + std::to_string(order_a) + " outside 2.0 +/- 0.2");
    check(order_b > 1.8 && order_b < 2.2,
          "convergence order " + std::to_string(order_b) + " outside 2.0 +/- 0.2");
  }

  // (b) norm drift over the full figure-2 run
  {
    const Figure2Params fp;
    const Grid g = make_grid(fp.x_min, fp.x_max, fp.n, fp.constants.hbar);
    const WaveFunction psi0 = gaussian(fp.packet, g);
    const auto steps = static_cast<std::size_t>(std::round(fp.t_stop / fp.dt));
    const WaveFunction end =
        evolve_potential(psi0, Potential{fp.barrier}, {fp.dt, steps}, fp.constants);
    const double drift = std::abs(norm_squared(end) - 1.0);
    check(drift < 1e-10, "norm drift " + std::to_string(drift) + " over the full run");
  }

  // (c) harmonic coherent-state periodicity, error O(dt^2)
  {
    const PhysicalConstants one{1.0, 1.0};
    const double omega = 2.0;
    const Grid g = make_grid(-10.0, 10.0, 512);
    const WaveFunction psi0 = gaussian({1.5, 0.0, std::sqrt(0.5 / omega)}, g);
    const double period = 2.0 * std::numbers::pi / omega;
    auto density_error = [&](double dt) {
      const auto steps = static_cast<std::size_t>(std::round(period / dt));
      const WaveFunction psi =
          evolve_potential(psi0, HarmonicPotential{omega, 0.0}, {period / double(steps), steps}, one);
      double m = 0.0;
      for (std::size_t i = 0; i < g.n; ++i)
        m = std::max(m, std::abs(std::norm(psi.amps[i]) - std::norm(psi0.amps[i])));
      return m;
    };
    const double e1 = density_error(2e-3), e2 = density_error(1e-3);
    check(e1 < 1e-4, "coherent-state density error " + std::to_string(e1));
    const double order = std::log2(e1 / e2);
    check(order > 1.6 && order < 2.4, "periodicity error order " + std::to_string(order));
  }
}

void criterion9_moment_crosscheck() {
  // (a) tau via the energy route vs the time route on a smooth Fourier pair
  EtaProfile eta;
  const std::size_t n = 4001;
  eta.dE = 8.0 / double(n - 1);
  eta.energies.resize(n);
  eta.values.resize(n);
  double nrm = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double E = k * eta.dE;
    eta.energies[k] = E;
    eta.values[k] = E * E * std::exp(-E * E);
    nrm += eta.values[k] * eta.values[k];
  }
  const double s = 1.0 / std::sqrt(nrm * eta.dE);
  for (auto& v : eta.values) v *= s;
  const double tau2_energy = tau_from_eta(eta);

  std::vector<double> t;
  for (int k = -4500; k <= 4500; ++k) t.push_back(k * 0.01);
  std::vector<std::complex<double>> chi(t.size());
  for (std::size_t j = 0; j < t.size(); ++j) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t k = 0; k < n; ++k)
      acc += eta.values[k] * std::polar(1.0, -eta.energies[k] * t[j]);
    chi[j] = acc * eta.dE / std::sqrt(2.0 * std::numbers::pi);
  }
  const double tau2_time = tau_squared(t, chi, 0.0);
  check(std::abs(tau2_time - tau2_energy) < 1e-4 * tau2_energy,
        "tau^2 routes disagree: " + std::to_string(tau2_time) + " vs " +
            std::to_string(tau2_energy));

  // (b) eps^2 shift identity on random profiles
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(0.2, 0.8);
  for (int trial = 0; trial < 8; ++trial) {
    EtaProfile p;
    p.dE = 1e-3;
    const std::size_t m = 12001;
    p.energies.resize(m);
    p.values.resize(m);
    const double c1 = 2.0 + 4.0 * u(rng), w1 = u(rng), c2 = 2.0 + 4.0 * u(rng), w2 = u(rng);
    for (std::size_t k = 0; k < m; ++k) {
      const double E = k * p.dE;
      p.energies[k] = E;
      p.values[k] = std::exp(-0.5 * (E - c1) * (E - c1) / (w1 * w1)) +
                    0.7 * std::exp(-0.5 * (E - c2) * (E - c2) / (w2 * w2));
    }
    p.values[0] = 0.0;
    double tot = 0.0, m1 = 0.0;
    for (std::size_t k = 0; k + 1 < m; ++k) {
      const double w0 = p.values[k] * p.values[k];
      const double w1s = p.values[k + 1] * p.values[k + 1];
      tot += 0.5 * p.dE * (w0 + w1s);
      m1 += 0.5 * p.dE * (w0 * p.energies[k] + w1s * p.energies[k + 1]);
    }
    const double mean = m1 / tot;
    const double e0 = 1.0 + u(rng);
    const double lhs = epsilon_squared(p, e0);
    const double rhs = epsilon_squared(p, mean) + (mean - e0) * (mean - e0);
    check(std::abs(lhs - rhs) < 1e-8, "eps^2 shift identity violated by " +
                                          std::to_string(std::abs(lhs - rhs)));
  }
}

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;
  std::function<void()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "Wigner analytic anchor at ratio 0", 1.0, criterion1_wigner_anchor},
      {2, "figure 1 sweep: monotone, bounded, converged", 30.0, criterion2_figure1_sweep},
      {3, "tau divergence at ratio -0.99", 5.0, criterion3_low_energy_divergence},
      {4, "free Kijowski normalization and peak", 10.0, criterion4_kijowski_normalization},
      {5, "covariance under time translation", 10.0, criterion5_covariance},
      {6, "figure 2: Pi_+ vs J around the barrier", 120.0, criterion6_figure2},
      {7, "reduction identity at V = 0", 20.0, criterion7_reduction_identity},
      {8, "propagator quality", 60.0, criterion8_propagator_quality},
      {9, "moment machinery cross-check", 5.0, criterion9_moment_crosscheck},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string error;
    try {
      c.run();
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (error.empty() && seconds > c.time_limit_s)
      error = "runtime " + std::to_string(seconds) + " s exceeds " +
              std::to_string(c.time_limit_s) + " s";
    if (error.empty()) {
      std::printf("criterion %d (%s): PASS (%.2f s)\n", c.id, c.name, seconds);
    } else {
      std::printf("criterion %d (%s): FAIL (%.2f s) -- %s\n", c.id, c.name, seconds,
                  error.c_str());
      ++failures;
    }
    std::fflush(stdout);
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures;
}

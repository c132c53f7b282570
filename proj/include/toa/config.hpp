#pragma once

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "toa/arrival.hpp"
#include "toa/constants.hpp"
#include "toa/errors.hpp"
#include "toa/grid.hpp"
#include "toa/potential.hpp"
#include "toa/states.hpp"

namespace toa {

inline constexpr int kConfigSchemaVersion = 1;

struct GridSpec {
  double x_min = 0.0;
  double x_max = 0.0;
  std::size_t n = 0;
};

/// Tabulated initial state: complex amplitudes per grid node; normalized on
/// ingestion if requested by the file.
struct TabulatedState {
  std::vector<std::complex<double>> amps;
};

/// One arrival run, fully described: everything a figure needs lives in one
/// committed file. All quantities are atomic units.
struct RunConfig {
  int schema_version = kConfigSchemaVersion;
  PhysicalConstants constants;
  GridSpec grid;
  std::variant<GaussianSpec, TabulatedState> initial_state;
  Potential potential = FreePotential{};
  double X = 0.0;
  double t_start = 0.0;
  double t_stop = 0.0;
  double dt_sample = 0.0;
  double dt = 0.0;
};

namespace detail {

inline const nlohmann::json& field(const nlohmann::json& j, const std::string& key,
                                   const std::string& where) {
  auto it = j.find(key);
  if (it == j.end())
    throw validation_error("config: missing field '" + where + key + "'");
  return *it;
}

inline double number(const nlohmann::json& j, const std::string& key, const std::string& where) {
  const auto& f = field(j, key, where);
  if (!f.is_number())
    throw validation_error("config: field '" + where + key + "' must be a number");
  return f.get<double>();
}

}  // namespace detail

inline RunConfig parse_run_config(const nlohmann::json& j) {
  RunConfig c;
  const auto& ver = detail::field(j, "schema_version", "");
  if (!ver.is_number_integer() || ver.get<int>() != kConfigSchemaVersion)
    throw validation_error("config: schema_version must be " +
                           std::to_string(kConfigSchemaVersion));

  const auto& constants = detail::field(j, "constants", "");
  c.constants.hbar = detail::number(constants, "hbar", "constants.");
  c.constants.mass = detail::number(constants, "mass", "constants.");
  validate(c.constants);

  const auto& grid = detail::field(j, "grid", "");
  c.grid.x_min = detail::number(grid, "x_min", "grid.");
  c.grid.x_max = detail::number(grid, "x_max", "grid.");
  const auto& n = detail::field(grid, "n", "grid.");
  if (!n.is_number_unsigned()) throw validation_error("config: grid.n must be a positive integer");
  c.grid.n = n.get<std::size_t>();

  const auto& st = detail::field(j, "initial_state", "");
  const std::string st_type = detail::field(st, "type", "initial_state.").get<std::string>();
  if (st_type == "gaussian") {
    GaussianSpec gs;
    gs.x0 = detail::number(st, "x0", "initial_state.");
    gs.p0 = detail::number(st, "p0", "initial_state.");
    gs.sigma_q = detail::number(st, "sigma_q", "initial_state.");
    c.initial_state = gs;
  } else if (st_type == "tabulated") {
    const auto& re = detail::field(st, "re", "initial_state.");
    const auto& im = detail::field(st, "im", "initial_state.");
    if (!re.is_array() || !im.is_array() || re.size() != im.size())
      throw validation_error("config: initial_state.re/im must be equal-length arrays");
    TabulatedState ts;
    ts.amps.resize(re.size());
    for (std::size_t i = 0; i < re.size(); ++i)
      ts.amps[i] = {re[i].get<double>(), im[i].get<double>()};
    c.initial_state = ts;
  } else {
    throw validation_error("config: initial_state.type must be 'gaussian' or 'tabulated'");
  }

  const auto& pot = detail::field(j, "potential", "");
  const std::string pot_type = detail::field(pot, "type", "potential.").get<std::string>();
  if (pot_type == "free") {
    c.potential = FreePotential{};
  } else if (pot_type == "square_barrier") {
    SquareBarrier b;
    b.height = detail::number(pot, "height", "potential.");
    b.left = detail::number(pot, "left", "potential.");
    b.right = detail::number(pot, "right", "potential.");
    if (!(b.left < b.right))
      throw validation_error("config: potential.left must be < potential.right");
    c.potential = b;
  } else if (pot_type == "harmonic") {
    HarmonicPotential h;
    h.omega = detail::number(pot, "omega", "potential.");
    h.center = detail::number(pot, "center", "potential.");
    c.potential = h;
  } else if (pot_type == "tabulated") {
    const auto& vals = detail::field(pot, "values", "potential.");
    if (!vals.is_array()) throw validation_error("config: potential.values must be an array");
    TabulatedPotential t;
    t.values = vals.get<std::vector<double>>();
    c.potential = t;
  } else {
    throw validation_error("config: unknown potential.type '" + pot_type + "'");
  }

  const auto& arr = detail::field(j, "arrival", "");
  c.X = detail::number(arr, "X", "arrival.");
  c.t_start = detail::number(arr, "t_start", "arrival.");
  c.t_stop = detail::number(arr, "t_stop", "arrival.");
  c.dt_sample = detail::number(arr, "dt_sample", "arrival.");
  if (!(c.dt_sample > 0.0)) throw validation_error("config: arrival.dt_sample must be > 0");
  if (!(c.t_stop > c.t_start)) throw validation_error("config: arrival.t_stop must exceed t_start");
  if (!(c.t_start >= 0.0)) throw validation_error("config: arrival.t_start must be >= 0");

  const auto& evo = detail::field(j, "evolution", "");
  c.dt = detail::number(evo, "dt", "evolution.");
  if (!(c.dt > 0.0)) throw validation_error("config: evolution.dt must be > 0");
  return c;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw validation_error("config: cannot open " + path.string());
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw validation_error("config: parse error in " + path.string() + ": " + e.what());
  }
  return parse_run_config(j);
}

inline nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j;
  j["schema_version"] = c.schema_version;
  j["constants"] = {{"hbar", c.constants.hbar}, {"mass", c.constants.mass}};
  j["grid"] = {{"x_min", c.grid.x_min}, {"x_max", c.grid.x_max}, {"n", c.grid.n}};
  if (const auto* gs = std::get_if<GaussianSpec>(&c.initial_state)) {
    j["initial_state"] = {
        {"type", "gaussian"}, {"x0", gs->x0}, {"p0", gs->p0}, {"sigma_q", gs->sigma_q}};
  } else {
    const auto& ts = std::get<TabulatedState>(c.initial_state);
    std::vector<double> re(ts.amps.size()), im(ts.amps.size());
    for (std::size_t i = 0; i < ts.amps.size(); ++i) {
      re[i] = ts.amps[i].real();
      im[i] = ts.amps[i].imag();
    }
    j["initial_state"] = {{"type", "tabulated"}, {"re", re}, {"im", im}};
  }
  if (is_free(c.potential)) {
    j["potential"] = {{"type", "free"}};
  } else if (const auto* b = std::get_if<SquareBarrier>(&c.potential)) {
    j["potential"] = {
        {"type", "square_barrier"}, {"height", b->height}, {"left", b->left}, {"right", b->right}};
  } else if (const auto* h = std::get_if<HarmonicPotential>(&c.potential)) {
    j["potential"] = {{"type", "harmonic"}, {"omega", h->omega}, {"center", h->center}};
  } else {
    const auto& t = std::get<TabulatedPotential>(c.potential);
    j["potential"] = {{"type", "tabulated"}, {"values", t.values}};
  }
  j["arrival"] = {
      {"X", c.X}, {"t_start", c.t_start}, {"t_stop", c.t_stop}, {"dt_sample", c.dt_sample}};
  j["evolution"] = {{"dt", c.dt}};
  return j;
}

struct ArrivalRunResult {
  ArrivalSeries series;
  nlohmann::json summary;
};

/// Runs one configured arrival experiment and assembles the JSON summary
/// (window integrals, peak locations, config echo).
inline ArrivalRunResult run_arrival(const RunConfig& c) {
  const Grid grid = make_grid(c.grid.x_min, c.grid.x_max, c.grid.n, c.constants.hbar);
  WaveFunction psi0;
  if (const auto* gs = std::get_if<GaussianSpec>(&c.initial_state)) {
    psi0 = gaussian(*gs, grid);
  } else {
    const auto& ts = std::get<TabulatedState>(c.initial_state);
    if (ts.amps.size() != grid.n)
      throw validation_error("config: tabulated initial state length must equal grid.n");
    psi0 = WaveFunction{grid, ts.amps, 0.0};
    const double n2 = norm_squared(psi0);
    if (!(n2 > 0.0)) throw validation_error("config: tabulated initial state has zero norm");
    const double s = 1.0 / std::sqrt(n2);
    for (auto& a : psi0.amps) a *= s;
  }
  if (!grid.contains(c.X)) throw validation_error("config: arrival.X outside the grid domain");

  const auto times = time_lattice(c.t_start, c.t_stop, c.dt_sample);
  const auto steps = static_cast<std::size_t>(std::floor(c.t_stop / c.dt + 0.5));
  ArrivalRunResult out;
  out.series = arrival_general(psi0, c.potential, c.X, times, EvolutionParams{c.dt, steps},
                               c.constants);

  auto window_integral = [&](const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < v.size(); ++k)
      s += 0.5 * (times[k + 1] - times[k]) * (v[k] + v[k + 1]);
    return s;
  };
  auto peak = [&](const std::vector<double>& v) {
    std::size_t arg = 0;
    for (std::size_t k = 1; k < v.size(); ++k)
      if (v[k] > v[arg]) arg = k;
    return nlohmann::json{{"T", times[arg]}, {"value", v[arg]}};
  };
  out.summary["schema_version"] = kConfigSchemaVersion;
  out.summary["config"] = to_json(c);
  out.summary["window_integral"] = {{"pi_plus", window_integral(out.series.pi_plus)},
                                    {"pi_minus", window_integral(out.series.pi_minus)}};
  out.summary["peak"] = {{"pi_plus", peak(out.series.pi_plus)},
                         {"pi_minus", peak(out.series.pi_minus)}};
  return out;
}

/// RunConfig mirror of the built-in Figure-2 preset (the committed
/// configs/figure2.json carries the same numbers; a test keeps them in sync).
inline RunConfig figure2_config(const Figure2Params& fp = {}) {
  RunConfig c;
  c.constants = fp.constants;
  c.grid = GridSpec{fp.x_min, fp.x_max, fp.n};
  c.initial_state = fp.packet;
  c.potential = fp.barrier;
  c.X = 15.0;
  c.t_start = fp.t_start;
  c.t_stop = fp.t_stop;
  c.dt_sample = fp.dt_sample;
  c.dt = fp.dt;
  return c;
}

}  // namespace toa

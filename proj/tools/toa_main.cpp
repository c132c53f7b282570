// toa: time-of-arrival distributions and Wigner minimum-uncertainty states.
//
// Subcommands
//   wigner-curve  sweep of the minimized uncertainty product vs <E>/eps
//   wigner-state  one solved eta(E) profile
//   arrival       arrival-time series for a configured run (CSV + JSON summary)
//   figure2       the built-in barrier-collision preset at a chosen X
//
// Exit codes: 0 success, 1 validation error, 2 numerical non-convergence.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "toa/toa.hpp"

#ifndef TOA_DEFAULT_CONFIG_DIR
#define TOA_DEFAULT_CONFIG_DIR "configs"
#endif

namespace {

std::filesystem::path summary_path(const std::filesystem::path& out) {
  if (out.extension() == ".csv") {
    auto p = out;
    p.replace_extension(".summary.json");
    return p;
  }
  return out.string() + ".summary.json";
}

int run_wigner_curve(double ratio_min, double ratio_max, std::size_t steps,
                     const std::string& out) {
  const auto rows = toa::wigner_curve(ratio_min, ratio_max, steps);
  toa::csv::write_file(out, toa::csv::render_wigner_curve(rows));
  std::size_t failed = 0;
  for (const auto& r : rows)
    if (!r.converged) ++failed;
  if (failed > 0) {
    std::fprintf(stderr, "wigner-curve: %zu of %zu rows failed to converge\n", failed,
                 rows.size());
    return 2;
  }
  std::printf("wigner-curve: %zu rows -> %s\n", rows.size(), out.c_str());
  return 0;
}

int run_wigner_state(double ratio, const std::string& out) {
  const auto st = toa::minimize_uncertainty(ratio);
  toa::csv::write_file(out, toa::csv::render_eta(st.eta));
  std::printf("wigner-state: ratio=%g eps*tau=%.12g <E>/eps=%.12g lambda'=%.12g iterations=%zu\n",
              st.ratio, st.epsilon * st.tau, st.mean_E / st.epsilon, st.lambda_prime,
              st.iterations);
  return 0;
}

int run_arrival_cmd(const std::string& config_path, const std::string& out) {
  const auto cfg = toa::load_run_config(config_path);
  const auto result = toa::run_arrival(cfg);
  toa::csv::write_file(out, toa::csv::render_arrival(result.series));
  toa::csv::write_file(summary_path(out), result.summary.dump(2) + "\n");
  std::printf("arrival: %zu samples at X=%g -> %s\n", result.series.times.size(),
              result.series.X, out.c_str());
  return 0;
}

int run_figure2(double position, const std::string& config_path, const std::string& out) {
  auto cfg = toa::load_run_config(config_path);
  cfg.X = position;
  const auto result = toa::run_arrival(cfg);
  toa::csv::write_file(out, toa::csv::render_arrival(result.series));
  toa::csv::write_file(summary_path(out), result.summary.dump(2) + "\n");
  std::printf("figure2: X=%g, %zu samples -> %s\n", position, result.series.times.size(),
              out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum time-of-arrival distributions and Wigner minimum-uncertainty states"};
  app.require_subcommand(1);

  double ratio_min = 0.0, ratio_max = 0.0, ratio = 0.0, position = 0.0;
  std::size_t steps = 0;
  std::string out, config_path;
  const std::string default_fig2 =
      (std::filesystem::path(TOA_DEFAULT_CONFIG_DIR) / "figure2.json").string();

  auto* curve = app.add_subcommand("wigner-curve", "sweep the minimized eps*tau curve");
  curve->add_option("--ratio-min", ratio_min, "lowest E0/eps (> -1)")->required();
  curve->add_option("--ratio-max", ratio_max, "highest E0/eps")->required();
  curve->add_option("--steps", steps, "number of sweep rows")->required();
  curve->add_option("--out", out, "output CSV path")->required();

  auto* state = app.add_subcommand("wigner-state", "solve one minimum-uncertainty profile");
  state->add_option("--ratio", ratio, "E0/eps (> -1)")->required();
  state->add_option("--out", out, "output CSV path (columns E,eta)")->required();

  auto* arrival = app.add_subcommand("arrival", "arrival-time series for a configured run");
  arrival->add_option("--config", config_path, "run configuration (JSON)")->required();
  arrival->add_option("--out", out, "output CSV path")->required();

  auto* figure2 = app.add_subcommand("figure2", "built-in barrier-collision preset");
  figure2->add_option("--position", position, "arrival point X")->required();
  figure2->add_option("--out", out, "output CSV path")->required();
  figure2->add_option("--config", config_path, "preset override")->default_val(default_fig2);

  try {
    app.parse(argc, argv);
    if (curve->parsed()) return run_wigner_curve(ratio_min, ratio_max, steps, out);
    if (state->parsed()) return run_wigner_state(ratio, out);
    if (arrival->parsed()) return run_arrival_cmd(config_path, out);
    if (figure2->parsed()) return run_figure2(position, config_path, out);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const toa::validation_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const toa::numerical_error& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

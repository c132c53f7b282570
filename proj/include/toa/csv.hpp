#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "toa/arrival.hpp"
#include "toa/errors.hpp"
#include "toa/wigner.hpp"

namespace toa::csv {

/// Full-precision numeric formatting (%.17g) so identical runs produce
/// bit-identical files and a reader recovers the exact double.
inline std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string render_arrival(const ArrivalSeries& s) {
  if (s.j.size() != s.times.size())
    throw validation_error("render_arrival: series has no current-density channel");
  std::string out = "T,pi_plus,pi_minus,j\n";
  for (std::size_t k = 0; k < s.times.size(); ++k) {
    out += g17(s.times[k]);
    out += ',';
    out += g17(s.pi_plus[k]);
    out += ',';
    out += g17(s.pi_minus[k]);
    out += ',';
    out += g17(s.j[k]);
    out += '\n';
  }
  return out;
}

inline std::string render_wigner_curve(const std::vector<WignerCurveRow>& rows) {
  std::string out = "ratio,mean_E_over_eps,eps_tau,lambda_prime,iterations,converged\n";
  for (const auto& r : rows) {
    out += g17(r.ratio);
    out += ',';
    out += g17(r.mean_E_over_eps);
    out += ',';
    out += g17(r.eps_tau);
    out += ',';
    out += g17(r.lambda_prime);
    out += ',';
    out += std::to_string(r.iterations);
    out += ',';
    out += r.converged ? "true" : "false";
    out += '\n';
  }
  return out;
}

inline std::string render_eta(const EtaProfile& eta) {
  std::string out = "E,eta\n";
  for (std::size_t k = 0; k < eta.values.size(); ++k) {
    out += g17(eta.energies[k]);
    out += ',';
    out += g17(eta.values[k]);
    out += '\n';
  }
  return out;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw validation_error("cannot open output file: " + path.string());
  f << content;
  f.flush();
  if (!f) throw validation_error("failed writing output file: " + path.string());
}

}  // namespace toa::csv

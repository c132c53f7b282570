#pragma once

#include <variant>
#include <vector>

#include "toa/constants.hpp"
#include "toa/errors.hpp"
#include "toa/grid.hpp"

namespace toa {

struct FreePotential {};

struct SquareBarrier {
  double height = 0.0;
  double left = 0.0;
  double right = 0.0;
};

struct HarmonicPotential {
  double omega = 0.0;
  double center = 0.0;
};

struct TabulatedPotential {
  std::vector<double> values;  // one per grid node
};

using Potential = std::variant<FreePotential, SquareBarrier, HarmonicPotential, TabulatedPotential>;

inline bool is_free(const Potential& v) { return std::holds_alternative<FreePotential>(v); }

/// V(x_i) per grid node. Sharp barrier edges are kept sharp: a node is inside
/// iff left <= x_i <= right. The harmonic well is (1/2) m omega^2 (x-c)^2.
inline std::vector<double> sample_potential(const Potential& v, const Grid& grid,
                                            const PhysicalConstants& pc = {}) {
  validate(pc);
  std::vector<double> out(grid.n, 0.0);
  if (const auto* barrier = std::get_if<SquareBarrier>(&v)) {
    if (!(barrier->left < barrier->right))
      throw validation_error("square_barrier: left must be < right");
    for (std::size_t i = 0; i < grid.n; ++i) {
      const double x = grid.node(i);
      if (x >= barrier->left && x <= barrier->right) out[i] = barrier->height;
    }
  } else if (const auto* h = std::get_if<HarmonicPotential>(&v)) {
    if (!(h->omega > 0.0)) throw validation_error("harmonic: omega must be > 0");
    for (std::size_t i = 0; i < grid.n; ++i) {
      const double d = grid.node(i) - h->center;
      out[i] = 0.5 * pc.mass * h->omega * h->omega * d * d;
    }
  } else if (const auto* t = std::get_if<TabulatedPotential>(&v)) {
    if (t->values.size() != grid.n)
      throw validation_error("tabulated potential: length must equal grid.n");
    out = t->values;
  }
  return out;
}

}  // namespace toa

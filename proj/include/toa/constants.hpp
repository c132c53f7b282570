#pragma once

#include "toa/errors.hpp"

namespace toa {

/// Atomic units by default (hbar = 1). Mass is configurable; nothing in the
/// library assumes m = 1.
struct PhysicalConstants {
  double hbar = 1.0;
  double mass = 1.0;
};

inline void validate(const PhysicalConstants& pc) {
  if (!(pc.hbar > 0.0)) throw validation_error("PhysicalConstants: hbar must be > 0");
  if (!(pc.mass > 0.0)) throw validation_error("PhysicalConstants: mass must be > 0");
}

}  // namespace toa

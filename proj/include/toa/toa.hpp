#pragma once

// Quantum time-of-arrival distributions (free-motion Kijowski and the
// covariant generalization to arbitrary potentials) and Wigner's constrained
// variational problem for minimum time-energy uncertainty states.

#include "toa/arrival.hpp"
#include "toa/config.hpp"
#include "toa/constants.hpp"
#include "toa/csv.hpp"
#include "toa/errors.hpp"
#include "toa/grid.hpp"
#include "toa/potential.hpp"
#include "toa/propagate.hpp"
#include "toa/states.hpp"
#include "toa/wavefunction.hpp"
#include "toa/wigner.hpp"

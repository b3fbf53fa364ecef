#pragma once

#include "wkbsolve/problem.hpp"

namespace wkb {

// Embedded 4th/5th order results at x + h.
struct RKPair {
  WaveState y4;
  WaveState y5;
};

// Runge-Kutta-Fehlberg 4(5) step on (phi, phi')' = (phi', -a phi / eps^2).
RKPair rkf45_step(const Problem& problem, const WaveState& state, double h);

}  // namespace wkb

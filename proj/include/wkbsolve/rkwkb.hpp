#pragma once

#include "wkbsolve/phase.hpp"
#include "wkbsolve/problem.hpp"

namespace wkb {

// WKB basis pair f+, f- with first and second derivatives at one point.
struct WKBBasis {
  int order = 2;
  cplx fp, fm;
  cplx dfp, dfm;
  cplx d2fp, d2fm;
};

/// Third WKB-order correction phi_3 = b / (2 sqrt(a)).
double eval_phi3(const Problem& problem, double x);

/// f+- = a^{-1/4} exp(+-i phase/eps) for order 2; order 3 multiplies by
/// exp(eps^2 phi_3). `phase` is phi^eps(x) in whatever gauge the caller uses.
WKBBasis wkb_basis(const Problem& problem, int order, double x, const PhaseValue& phase);

/// One Runge-Kutta-WKB step of length h with basis functions of the given
/// WKB order. `increment` is the phase increment over [x, x + h]. Throws
/// WkbInadmissible for a degenerate basis.
WaveState rkwkb_step(const Problem& problem, const WaveState& state, double h, int order,
                     const PhaseValue& increment);

WaveState rkwkb_step(const Problem& problem, const PhaseProvider& provider,
                     const WaveState& state, double h, int order);

}  // namespace wkb

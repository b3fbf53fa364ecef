#pragma once

#include <array>

#include "wkbsolve/jet.hpp"
#include "wkbsolve/phase.hpp"
#include "wkbsolve/problem.hpp"

namespace wkb {

using Vec2 = std::array<cplx, 2>;
using Mat2 = std::array<std::array<cplx, 2>, 2>;

// b and the recursively defined b_0..b_3 at one point, together with the
// phase derivative sqrt(a) - eps^2 b they are built from.
struct BkTable {
  double b = 0.0;
  double b0 = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  double b3 = 0.0;
  double dphase = 0.0;
};

/// Jet of b(x) = -(a^{-1/4})'' / (2 a^{1/4}) from a jet of a with at least
/// terms + 2 coefficients.
Jet b_jet(const Jet& a, int terms);

/// b(x); throws WkbInadmissible when a(x) < tau_guard.
double eval_b(const Problem& problem, double x);

/// b and b_0..b_3 by exact chain-rule expansion over the derivative tower of
/// a. Throws WkbInadmissible on a guard violation.
BkTable eval_bk(const Problem& problem, double x);

struct OscKernels {
  cplx h1;  // e^{iy} - 1
  cplx h2;  // e^{iy} - 1 - iy
};

/// Both kernels with full relative accuracy for small |y|.
OscKernels osc_kernels(double y);

/// U = (a^{1/4} phi, eps (a^{1/4} phi)' / sqrt(a)).
Vec2 to_U(const Problem& problem, const WaveState& state);
WaveState from_U(const Problem& problem, double x, const Vec2& u);

// Z variables at x, carrying the phase used to build them.
struct ZState {
  double x = 0.0;
  Vec2 z{};
  PhaseValue phase;
};

/// Z = exp(-i Phi/eps) P U with P = [[i, 1], [1, i]] / sqrt(2).
ZState to_Z(const Vec2& u, double x, const PhaseValue& phase, double eps);
Vec2 from_Z(const ZState& z, double eps);

ZState to_Z(const Problem& problem, const WaveState& state, const PhaseValue& phase);
WaveState from_Z(const Problem& problem, const ZState& z);

// The three update matrices of the marching schemes on [x_n, x_{n+1}].
struct WkbMatrices {
  Mat2 a1;      // first-order scheme
  Mat2 a1_mod;  // second-order scheme, off-diagonal part
  Mat2 a2;      // second-order scheme, diagonal part
};

WkbMatrices wkb_matrices(const Problem& problem, double x_n, double x_next,
                         const PhaseValue& phase_n, const PhaseValue& increment);

struct WkbPair {
  ZState first;   // O(h) scheme
  ZState second;  // O(h^2) scheme
};

/// Both marching schemes from the same Z_n over [zn.x, x_next]; `increment`
/// is the phase increment s_n over that interval.
WkbPair wkb_step(const Problem& problem, const ZState& zn, double x_next,
                 const PhaseValue& increment);

/// Same, with the increment taken from the provider.
WkbPair wkb_step(const Problem& problem, const ZState& zn, double x_next,
                 const PhaseProvider& provider);

}  // namespace wkb

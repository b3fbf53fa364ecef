#include "wkbsolve/rkwkb.hpp"

#include <cmath>
#include <stdexcept>

#include "wkbsolve/errors.hpp"
#include "wkbsolve/wkb.hpp"

namespace wkb {

namespace {

constexpr double kDegenerate = 1e-30;
const cplx kI(0.0, 1.0);

Jet checked_jet(const Problem& problem, double x, int terms) {
  const Jet a = problem.field.jet(x, terms);
  if (!(a.value() >= problem.tau_guard)) throw WkbInadmissible("a(x) below tau_guard");
  return a;
}

}  // namespace

double eval_phi3(const Problem& problem, double x) {
  const Jet a = checked_jet(problem, x, 3);
  return b_jet(a, 1).value() / (2.0 * std::sqrt(a.value()));
}

WKBBasis wkb_basis(const Problem& problem, int order, double x, const PhaseValue& phase) {
  if (order != 2 && order != 3) throw std::invalid_argument("wkb_basis: order must be 2 or 3");
  const Jet a = checked_jet(problem, x, 5);
  const double eps = problem.epsilon;
  const double eps2 = eps * eps;

  const Jet a3 = a.truncated(3);
  const Jet b = b_jet(a, 3);
  const Jet root = pow(a3, 0.5);
  Jet amp = pow(a3, -0.25);
  if (order == 3) amp = amp * exp(eps2 * (b / (2.0 * root)));
  const Jet dphase = root - eps2 * b;
  if (!(dphase.value() >= 1e-10 * root.value()))
    throw WkbInadmissible("phase derivative sqrt(a) - eps^2 b too small");

  const double g = amp.value();
  const double dg = amp.derivative_at(1);
  const double d2g = amp.derivative_at(2);
  const double w = dphase.value() / eps;
  const double dw = dphase.derivative_at(1) / eps;

  const cplx ep = unit_phase(phase, eps, 1);
  const cplx em = std::conj(ep);
  WKBBasis out;
  out.order = order;
  out.fp = g * ep;
  out.fm = g * em;
  out.dfp = (dg + kI * g * w) * ep;
  out.dfm = (dg - kI * g * w) * em;
  out.d2fp = (d2g + 2.0 * kI * dg * w + kI * g * dw - g * w * w) * ep;
  out.d2fm = (d2g - 2.0 * kI * dg * w - kI * g * dw - g * w * w) * em;
  return out;
}

WaveState rkwkb_step(const Problem& problem, const WaveState& state, double h, int order,
                     const PhaseValue& increment) {
  const double eps = problem.epsilon;
  const cplx d2phi = -problem.field.eval(state.x) * state.phi / (eps * eps);
  // local gauge: phase 0 at x_n
  const WKBBasis bn = wkb_basis(problem, order, state.x, {});
  const WKBBasis bn1 = wkb_basis(problem, order, state.x + h, increment);

  const cplx w1 = bn.dfp * bn.fm - bn.dfm * bn.fp;
  const cplx w2 = bn.d2fp * bn.dfm - bn.d2fm * bn.dfp;
  if (std::abs(w1) < kDegenerate || std::abs(w2) < kDegenerate)
    throw WkbInadmissible("rkwkb: degenerate basis");

  const cplx gp = (state.dphi * bn.fm - state.phi * bn.dfm) / w1;
  const cplx gm = -(state.dphi * bn.fp - state.phi * bn.dfp) / w1;
  const cplx dp = (d2phi * bn.dfm - state.dphi * bn.d2fm) / w2;
  const cplx dm = -(d2phi * bn.dfp - state.dphi * bn.d2fp) / w2;

  return {state.x + h, gp * bn1.fp + gm * bn1.fm, dp * bn1.dfp + dm * bn1.dfm};
}

WaveState rkwkb_step(const Problem& problem, const PhaseProvider& provider,
                     const WaveState& state, double h, int order) {
  return rkwkb_step(problem, state, h, order, provider.increment(state.x, state.x + h));
}

}  // namespace wkb

#include "wkbsolve/wkb.hpp"

#include <cmath>
#include <numbers>

#include "wkbsolve/errors.hpp"

namespace wkb {

namespace {

constexpr double kPhaseGuard = 1e-10;   // relative floor for sqrt(a) - eps^2 b
constexpr double kSeriesSwitch = 0.5;  // |y| below which Im h2 uses its series
const cplx kI(0.0, 1.0);
const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

void check_guard(const Problem& problem, double a) {
  if (!(a >= problem.tau_guard)) throw WkbInadmissible("a(x) below tau_guard");
}

}  // namespace

Jet b_jet(const Jet& a, int terms) {
  const Jet a0 = a.truncated(terms);
  const Jet a1 = a.derivative().truncated(terms);
  const Jet a2 = a.derivative().derivative().truncated(terms);
  return -5.0 / 32.0 * (a1 * a1) * pow(a0, -2.5) + 0.125 * a2 * pow(a0, -1.5);
}

double eval_b(const Problem& problem, double x) {
  const Jet a = problem.field.jet(x, 3);
  check_guard(problem, a.value());
  return b_jet(a, 1).value();
}

BkTable eval_bk(const Problem& problem, double x) {
  const Jet a = problem.field.jet(x, 6);
  check_guard(problem, a.value());
  const double eps2 = problem.epsilon * problem.epsilon;

  const Jet b = b_jet(a, 4);
  const Jet dphase = pow(a.truncated(4), 0.5) - eps2 * b;
  if (!(dphase.value() >= kPhaseGuard * std::sqrt(a.value())))
    throw WkbInadmissible("phase derivative sqrt(a) - eps^2 b too small");
  const Jet denom = 2.0 * dphase;

  const Jet b0 = b / denom;
  const Jet b1 = b0.derivative() / denom;
  const Jet b2 = b1.derivative() / denom;
  const Jet b3 = b2.derivative() / denom;

  BkTable t;
  t.b = b.value();
  t.b0 = b0.value();
  t.b1 = b1.value();
  t.b2 = b2.value();
  t.b3 = b3.value();
  t.dphase = dphase.value();
  return t;
}

OscKernels osc_kernels(double y) {
  const double sh = std::sin(0.5 * y);
  const double re = -2.0 * sh * sh;  // cos(y) - 1 without cancellation
  const double s = std::sin(y);
  double im2;
  if (std::abs(y) < kSeriesSwitch) {
    // sin(y) - y = -y^3/3! + y^5/5! - ...
    const double y2 = y * y;
    double term = y;
    im2 = 0.0;
    for (int k = 1; k < 20; ++k) {
      term *= -y2 / ((2.0 * k) * (2.0 * k + 1.0));
      im2 += term;
      if (std::abs(term) <= 1e-18 * std::abs(im2)) break;
    }
  } else {
    im2 = s - y;
  }
  return {cplx(re, s), cplx(re, im2)};
}

Vec2 to_U(const Problem& problem, const WaveState& state) {
  const double a = problem.field.eval(state.x, 0);
  check_guard(problem, a);
  const double da = problem.field.eval(state.x, 1);
  const double q = std::pow(a, 0.25);
  const double dq = 0.25 * da / (q * q * q);
  const double eps = problem.epsilon;
  return {q * state.phi, eps * (dq * state.phi + q * state.dphi) / std::sqrt(a)};
}

WaveState from_U(const Problem& problem, double x, const Vec2& u) {
  const double a = problem.field.eval(x, 0);
  check_guard(problem, a);
  const double da = problem.field.eval(x, 1);
  const double q = std::pow(a, 0.25);
  const double dq = 0.25 * da / (q * q * q);
  const cplx phi = u[0] / q;
  const cplx dphi = (u[1] * std::sqrt(a) / problem.epsilon - dq * phi) / q;
  return {x, phi, dphi};
}

ZState to_Z(const Vec2& u, double x, const PhaseValue& phase, double eps) {
  const cplx e = unit_phase(phase, eps, 1);
  ZState z;
  z.x = x;
  z.phase = phase;
  z.z[0] = std::conj(e) * (kI * u[0] + u[1]) * kInvSqrt2;
  z.z[1] = e * (u[0] + kI * u[1]) * kInvSqrt2;
  return z;
}

Vec2 from_Z(const ZState& z, double eps) {
  const cplx e = unit_phase(z.phase, eps, 1);
  const cplx w1 = e * z.z[0];
  const cplx w2 = std::conj(e) * z.z[1];
  return {(-kI * w1 + w2) * kInvSqrt2, (w1 - kI * w2) * kInvSqrt2};
}

ZState to_Z(const Problem& problem, const WaveState& state, const PhaseValue& phase) {
  return to_Z(to_U(problem, state), state.x, phase, problem.epsilon);
}

WaveState from_Z(const Problem& problem, const ZState& z) {
  return from_U(problem, z.x, from_Z(z, problem.epsilon));
}

WkbMatrices wkb_matrices(const Problem& problem, double x_n, double x_next,
                         const PhaseValue& phase_n, const PhaseValue& increment) {
  const BkTable tn = eval_bk(problem, x_n);
  const BkTable tn1 = eval_bk(problem, x_next);
  const double eps = problem.epsilon;
  const double e2 = eps * eps, e3 = e2 * eps, e4 = e3 * eps, e5 = e4 * eps;
  const double h = x_next - x_n;

  // e^{-2i phi/eps} at both ends; the "+" versions are conjugates.
  const cplx em_n = unit_phase(phase_n, eps, -2);
  const cplx em_n1 = unit_phase(phase_n + increment, eps, -2);
  const cplx ep_n = std::conj(em_n), ep_n1 = std::conj(em_n1);

  // kernels at y = 2 s/eps and -y
  const double y = 2.0 * increment.value() / eps;
  OscKernels kp;
  if (std::abs(y) < 1.0) {
    kp = osc_kernels(y);
  } else {
    const cplx h1 = unit_phase(increment, eps, 2) - 1.0;
    kp = {h1, h1 - kI * y};
  }
  const cplx h1p = kp.h1, h2p = kp.h2;
  const cplx h1m = std::conj(h1p), h2m = std::conj(h2p);

  const cplx edge12 = -kI * e2 * (tn.b0 * em_n - tn1.b0 * em_n1);
  const cplx edge21 = -kI * e2 * (tn1.b0 * ep_n1 - tn.b0 * ep_n);

  WkbMatrices m{};
  m.a1[0][1] = e3 * tn1.b1 * em_n * h1m + edge12;
  m.a1[1][0] = e3 * tn1.b1 * ep_n * h1p + edge21;

  m.a1_mod[0][1] = edge12 + e3 * (tn1.b1 * em_n1 - tn.b1 * em_n) -
                   kI * e4 * tn1.b2 * em_n * h1m - e5 * tn1.b3 * em_n * h2m;
  m.a1_mod[1][0] = edge21 + e3 * (tn1.b1 * ep_n1 - tn.b1 * ep_n) +
                   kI * e4 * tn1.b2 * ep_n * h1p - e5 * tn1.b3 * ep_n * h2p;

  const double trap = 0.5 * (tn1.b * tn1.b0 + tn.b * tn.b0);
  const double cross = tn.b0 * tn1.b0;
  const double tail = tn1.b1 * (tn.b0 - tn1.b0);
  m.a2[0][0] = -kI * e3 * h * trap - e4 * cross * h1m + e5 * tail * h2m;
  m.a2[1][1] = kI * e3 * h * trap - e4 * cross * h1p - e5 * tail * h2p;
  return m;
}

namespace {

Vec2 propagate(const Mat2& m, const Vec2& v) {
  return {v[0] + m[0][0] * v[0] + m[0][1] * v[1], v[1] + m[1][0] * v[0] + m[1][1] * v[1]};
}

Mat2 sum(const Mat2& a, const Mat2& b) {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = a[i][j] + b[i][j];
  return r;
}

}  // namespace

WkbPair wkb_step(const Problem& problem, const ZState& zn, double x_next,
                 const PhaseValue& increment) {
  const auto m = wkb_matrices(problem, zn.x, x_next, zn.phase, increment);
  WkbPair out;
  out.first.x = out.second.x = x_next;
  out.first.phase = out.second.phase = zn.phase + increment;
  out.first.z = propagate(m.a1, zn.z);
  out.second.z = propagate(sum(m.a1_mod, m.a2), zn.z);
  return out;
}

WkbPair wkb_step(const Problem& problem, const ZState& zn, double x_next,
                 const PhaseProvider& provider) {
  return wkb_step(problem, zn, x_next, provider.increment(zn.x, x_next));
}

}  // namespace wkb

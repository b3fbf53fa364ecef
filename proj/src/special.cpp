#include "wkbsolve/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace wkb {

namespace {

using Real = long double;

constexpr Real kPi = 3.141592653589793238462643383279502884L;
constexpr double kTailTolerance = 1e-16;

// Coefficients of q(x0 + s) in powers of s (Taylor shift).
std::vector<Real> shift_polynomial(std::span<const double> q, Real x0) {
  std::vector<Real> a(q.begin(), q.end());
  const auto n = a.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = n - 1; j-- > i;) a[j] += x0 * a[j + 1];
  return a;
}

Real step_limit(const std::vector<Real>& shifted, Real max_step) {
  Real limit = max_step;
  if (std::abs(shifted[0]) > 0) limit = std::min(limit, 1 / std::sqrt(std::abs(shifted[0])));
  for (int guard = 0; guard < 200; ++guard) {
    Real bound = 0, p = 1;
    for (Real c : shifted) {
      bound += std::abs(c) * p;
      p *= limit;
    }
    if (limit * limit * bound <= 1) break;
    limit *= 0.8L;
  }
  return limit;
}

LinearState taylor_step(const std::vector<Real>& shifted, LinearState s, Real delta, int terms) {
  std::vector<Real> d(terms, 0.0L);
  d[0] = s.w;
  if (terms > 1) d[1] = s.dw * delta;
  // q coefficients in units of delta, carrying the delta^2 of w''.
  std::vector<Real> qd(shifted.size());
  Real p = delta * delta;
  for (std::size_t j = 0; j < shifted.size(); ++j) {
    qd[j] = shifted[j] * p;
    p *= delta;
  }
  for (int k = 0; k + 2 < terms; ++k) {
    Real acc = 0;
    const int jmax = std::min<int>(k, static_cast<int>(qd.size()) - 1);
    for (int j = 0; j <= jmax; ++j) acc += qd[j] * d[k - j];
    d[k + 2] = acc / (static_cast<Real>(k + 1) * (k + 2));
  }
  LinearState out;
  Real dsum = 0;
  for (int k = terms - 1; k >= 0; --k) {
    out.w += d[k];
    dsum += k * d[k];
  }
  out.dw = dsum / delta;

  const Real scale = std::abs(s.w) + std::abs(s.dw * delta) + std::abs(out.w);
  const Real tail = std::abs(d[terms - 1]) + (terms > 1 ? std::abs(d[terms - 2]) : 0.0L);
  if (tail > kTailTolerance * scale)
    throw ContinuationError("taylor continuation: series tail not negligible");
  return out;
}

LinearState continue_to(std::span<const double> q, double x0, LinearState state, double x1,
                        double max_step, int terms) {
  if (q.empty()) throw std::invalid_argument("taylor continuation: empty coefficient list");
  if (terms < 3) throw std::invalid_argument("taylor continuation: need at least 3 terms");
  Real x = x0;
  const Real target = x1;
  while (x != target) {
    const auto shifted = shift_polynomial(q, x);
    const Real limit = step_limit(shifted, max_step);
    const Real remaining = target - x;
    Real delta = remaining;
    if (std::abs(remaining) > limit) delta = std::copysign(limit, remaining);
    state = taylor_step(shifted, state, delta, terms);
    x = (delta == remaining) ? target : x + delta;
  }
  return state;
}

// sign of Gamma(x) and log|Gamma(x)|; `pole` set at non-positive integers.
struct LogGamma {
  double log_abs = 0.0;
  int sign = 1;
  bool pole = false;
};

LogGamma log_gamma(double x) {
  LogGamma r;
  if (x <= 0 && x == std::floor(x)) {
    r.pole = true;
    return r;
  }
  r.log_abs = std::lgamma(x);
  if (x < 0) r.sign = (static_cast<long>(std::ceil(-x)) % 2 == 1) ? -1 : 1;
  return r;
}

}  // namespace

AsymCoeffs asymptotic_coeffs(int k) {
  if (k < 0) throw std::invalid_argument("asymptotic_coeffs: k must be >= 0");
  double u = 1.0;
  for (int j = 1; j <= k; ++j)
    u *= (6.0 * j - 5.0) * (6.0 * j - 3.0) * (6.0 * j - 1.0) / ((2.0 * j - 1.0) * 216.0 * j);
  const double v = (k == 0) ? 1.0 : u * (6.0 * k + 1.0) / (1.0 - 6.0 * k);
  return {u, v};
}

AiryQuad airy_asymptotic(double t, int K) {
  if (!(t > 0)) throw std::domain_error("airy_asymptotic: t must be positive");
  const Real tl = t;
  const Real zeta = 2 * tl * std::sqrt(tl) / 3;
  const Real c = std::cos(zeta), s = std::sin(zeta);
  const Real rt2 = std::sqrt(2.0L);
  const Real cq = (c + s) / rt2;  // cos(zeta - pi/4)
  const Real sq = (s - c) / rt2;  // sin(zeta - pi/4)

  Real su0 = 0, su1 = 0, sv0 = 0, sv1 = 0;
  Real zpow = 1;
  Real sign = 1;
  for (int k = 0; k <= K; ++k) {
    const auto even = asymptotic_coeffs(2 * k);
    const auto odd = asymptotic_coeffs(2 * k + 1);
    su0 += sign * even.u / zpow;
    sv0 += sign * even.v / zpow;
    zpow *= zeta;
    su1 += sign * odd.u / zpow;
    sv1 += sign * odd.v / zpow;
    zpow *= zeta;
    sign = -sign;
  }
  const Real quarter = std::pow(tl, 0.25L);
  const Real sqrt_pi = std::sqrt(kPi);
  AiryQuad r;
  r.ai = static_cast<double>((cq * su0 + sq * su1) / (sqrt_pi * quarter));
  r.dai = static_cast<double>(quarter / sqrt_pi * (sq * sv0 - cq * sv1));
  r.bi = static_cast<double>((-sq * su0 + cq * su1) / (sqrt_pi * quarter));
  r.dbi = static_cast<double>(quarter / sqrt_pi * (cq * sv0 + sq * sv1));
  return r;
}

LinearState taylor_continuation(std::span<const double> q, double x0, LinearState init,
                                double x1, double max_step, int terms) {
  return continue_to(q, x0, init, x1, max_step, terms);
}

CheckpointTable::CheckpointTable(std::vector<double> q, double x0, LinearState init, double lo,
                                 double hi, double spacing)
    : q_(std::move(q)), x0_(x0), spacing_(spacing), lo_(lo), hi_(hi) {
  if (!(lo <= x0 && x0 <= hi) || !(spacing > 0))
    throw std::invalid_argument("CheckpointTable: bad range");
  const long kmin = static_cast<long>(std::floor((lo - x0) / spacing));
  const long kmax = static_cast<long>(std::ceil((hi - x0) / spacing));
  first_index_ = kmin;
  points_.resize(static_cast<std::size_t>(kmax - kmin + 1));
  points_[static_cast<std::size_t>(-kmin)] = init;
  LinearState s = init;
  for (long k = 1; k <= kmax; ++k) {
    s = continue_to(q_, x0 + (k - 1) * spacing, s, x0 + k * spacing, 1.0, 30);
    points_[static_cast<std::size_t>(k - kmin)] = s;
  }
  s = init;
  for (long k = -1; k >= kmin; --k) {
    s = continue_to(q_, x0 + (k + 1) * spacing, s, x0 + k * spacing, 1.0, 30);
    points_[static_cast<std::size_t>(k - kmin)] = s;
  }
}

LinearState CheckpointTable::eval(double x) const {
  long k = std::lround((x - x0_) / spacing_);
  k = std::clamp(k, first_index_, first_index_ + static_cast<long>(points_.size()) - 1);
  const double xk = x0_ + k * spacing_;
  return continue_to(q_, xk, points_[static_cast<std::size_t>(k - first_index_)], x, 1.0, 30);
}

AiryQuad airy_at_zero() {
  const Real g13 = std::tgamma(1.0L / 3);
  const Real g23 = std::tgamma(2.0L / 3);
  AiryQuad r;
  r.ai = static_cast<double>(std::pow(3.0L, -2.0L / 3) / g23);
  r.dai = static_cast<double>(-std::pow(3.0L, -1.0L / 3) / g13);
  r.bi = static_cast<double>(std::pow(3.0L, -1.0L / 6) / g23);
  r.dbi = static_cast<double>(std::pow(3.0L, 1.0L / 6) / g13);
  return r;
}

namespace {

constexpr double kAiryQ[] = {0.0, 1.0};

struct AiryStart {
  LinearState ai, bi;
};

AiryStart airy_start() {
  const Real g13 = std::tgamma(1.0L / 3);
  const Real g23 = std::tgamma(2.0L / 3);
  AiryStart s;
  s.ai = {std::pow(3.0L, -2.0L / 3) / g23, -std::pow(3.0L, -1.0L / 3) / g13};
  s.bi = {std::pow(3.0L, -1.0L / 6) / g23, std::pow(3.0L, 1.0L / 6) / g13};
  return s;
}

struct AiryTables {
  CheckpointTable ai;
  CheckpointTable bi;
};

const AiryTables& airy_tables() {
  static const AiryTables tables = [] {
    const auto s = airy_start();
    const std::vector<double> q(std::begin(kAiryQ), std::end(kAiryQ));
    return AiryTables{CheckpointTable(q, 0.0, s.ai, -kAiryValueSwitch, 0.0),
                      CheckpointTable(q, 0.0, s.bi, -kAiryValueSwitch, 0.0)};
  }();
  return tables;
}

}  // namespace

AiryQuad airy_by_continuation(double t) {
  const auto s = airy_start();
  const auto ai = continue_to(kAiryQ, 0.0, s.ai, -t, 1.0, 30);
  const auto bi = continue_to(kAiryQ, 0.0, s.bi, -t, 1.0, 30);
  return {static_cast<double>(ai.w), static_cast<double>(ai.dw), static_cast<double>(bi.w),
          static_cast<double>(bi.dw)};
}

AiryQuad airy_pair(double t) {
  if (!(t >= 0)) throw std::domain_error("airy_pair: t must be >= 0");
  const bool cont_values = t <= kAiryValueSwitch;
  const bool cont_derivs = t <= kAiryDerivativeSwitch;
  AiryQuad r;
  if (cont_values || cont_derivs) {
    const auto& tab = airy_tables();
    const auto ai = tab.ai.eval(-t);
    const auto bi = tab.bi.eval(-t);
    r = {static_cast<double>(ai.w), static_cast<double>(ai.dw), static_cast<double>(bi.w),
         static_cast<double>(bi.dw)};
  }
  if (!cont_values || !cont_derivs) {
    const auto a = airy_asymptotic(t, kAiryAsymptoticOrder);
    if (!cont_values) {
      r.ai = a.ai;
      r.bi = a.bi;
    }
    if (!cont_derivs) {
      r.dai = a.dai;
      r.dbi = a.dbi;
    }
  }
  return r;
}

double gamma_fn(double x) {
  if (x <= 0 && x == std::floor(x)) throw std::domain_error("gamma_fn: pole");
  return std::tgamma(x);
}

PcfValue pcf_at_zero(double nu) {
  const double half_log_pi = 0.5 * std::log(std::numbers::pi);
  const double ln2 = std::numbers::ln2;
  const auto g_val = log_gamma(0.75 + 0.5 * nu);
  const auto g_der = log_gamma(0.25 + 0.5 * nu);
  // 1/Gamma vanishes at the poles.
  const double log_u = g_val.pole ? -std::numeric_limits<double>::infinity()
                                  : half_log_pi - (0.5 * nu + 0.25) * ln2 - g_val.log_abs;
  const double log_du = g_der.pole ? -std::numeric_limits<double>::infinity()
                                   : half_log_pi - (0.5 * nu - 0.25) * ln2 - g_der.log_abs;
  PcfValue r;
  r.log_scale = std::max(log_u, log_du);
  r.u = g_val.pole ? 0.0 : g_val.sign * std::exp(log_u - r.log_scale);
  r.du = g_der.pole ? 0.0 : -g_der.sign * std::exp(log_du - r.log_scale);
  return r;
}

PcfValue pcf_U_scaled(double nu, double z) {
  const auto z0 = pcf_at_zero(nu);
  const double q[] = {nu, 0.0, 0.25};
  const auto s = continue_to(q, 0.0, {z0.u, z0.du}, z, 1.0, 30);
  return {static_cast<double>(s.w), static_cast<double>(s.dw), z0.log_scale};
}

std::pair<double, double> pcf_U(double nu, double z) {
  const auto s = pcf_U_scaled(nu, z);
  const double f = std::exp(s.log_scale);
  return {s.u * f, s.du * f};
}

}  // namespace wkb

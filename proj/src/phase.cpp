#include "wkbsolve/phase.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wkbsolve/errors.hpp"
#include "wkbsolve/wkb.hpp"

namespace wkb {

namespace {

// 2*pi split into three doubles for Cody-Waite reduction.
constexpr double kTwoPi1 = 6.283185307179586;
constexpr double kTwoPi2 = 2.4492935982947064e-16;
constexpr double kTwoPi3 = -5.989539619436679e-33;
constexpr double kInvTwoPi = 0.15915494309189535;

}  // namespace

PhaseValue PhaseValue::from_long_double(long double v) {
  PhaseValue p;
  p.hi = static_cast<double>(v);
  p.lo = static_cast<double>(v - p.hi);
  return p;
}

PhaseValue& PhaseValue::operator+=(const PhaseValue& o) {
  // two-sum of the leading parts, then renormalise
  const double s = hi + o.hi;
  const double bb = s - hi;
  const double err = (hi - (s - bb)) + (o.hi - bb);
  const double tail = lo + o.lo + err;
  hi = s + tail;
  lo = tail - (hi - s);
  return *this;
}

cplx unit_phase(const PhaseValue& phase, double eps, int multiple) {
  const double big = multiple * phase.hi;
  const double small = multiple * phase.lo;
  const double q = big / eps;
  const double r = (std::fma(-q, eps, big) + small) / eps;
  const double k = std::nearbyint(q * kInvTwoPi);
  double reduced = std::fma(-k, kTwoPi1, q);
  reduced = std::fma(-k, kTwoPi2, reduced);
  reduced = std::fma(-k, kTwoPi3, reduced);
  const double angle = reduced + r;
  return {std::cos(angle), std::sin(angle)};
}

ClenshawCurtisRule::ClenshawCurtisRule(int nodes) {
  if (nodes < 2) throw std::invalid_argument("clenshaw_curtis: need at least 2 nodes");
  const int n = nodes - 1;
  nodes_.resize(nodes);
  weights_.assign(nodes, 0.0);
  std::vector<double> theta(nodes);
  for (int k = 0; k <= n; ++k) {
    theta[k] = std::numbers::pi * k / n;
    nodes_[k] = std::cos(theta[k]);
  }
  if (n == 1) {
    weights_ = {1.0, 1.0};
    nodes_ = {1.0, -1.0};
    return;
  }
  const bool even = n % 2 == 0;
  weights_[0] = weights_[n] = even ? 1.0 / (n * n - 1.0) : 1.0 / (1.0 * n * n);
  for (int i = 1; i < n; ++i) {
    double v = 1.0;
    const int kmax = even ? n / 2 - 1 : (n - 1) / 2;
    for (int k = 1; k <= kmax; ++k) v -= 2.0 * std::cos(2.0 * k * theta[i]) / (4.0 * k * k - 1.0);
    if (even) v -= std::cos(n * theta[i]) / (n * n - 1.0);
    weights_[i] = 2.0 * v / n;
  }
  // exact symmetric midpoint
  if (even) nodes_[n / 2] = 0.0;
}

double ClenshawCurtisRule::integrate(const std::function<double(double)>& f, double a,
                                     double b) const {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const double v = f(mid + half * nodes_[k]);
    if (!std::isfinite(v)) throw std::domain_error("clenshaw_curtis: non-finite integrand");
    sum += weights_[k] * v;
  }
  return half * sum;
}

double clenshaw_curtis(const std::function<double(double)>& f, double a, double b, int nodes) {
  return ClenshawCurtisRule(nodes).integrate(f, a, b);
}

PhaseMode PhaseMode::parse(const std::string& text) {
  if (text == "exact") return exact();
  if (text.rfind("cc:", 0) == 0) {
    std::size_t used = 0;
    const int n = std::stoi(text.substr(3), &used);
    if (used != text.size() - 3 || n < 2) throw std::invalid_argument("bad phase mode: " + text);
    return quadrature(n);
  }
  throw std::invalid_argument("bad phase mode: " + text);
}

std::string PhaseMode::str() const {
  return kind == Kind::exact ? "exact" : "cc:" + std::to_string(nodes);
}

PhaseProvider::PhaseProvider(const Problem& problem, PhaseMode mode, double x_ref,
                             PhaseValue offset)
    : problem_(&problem),
      mode_(mode),
      rule_(mode.kind == PhaseMode::Kind::quadrature ? mode.nodes : 2),
      x_ref_(x_ref),
      x_(x_ref),
      accumulated_(offset) {
  if (mode.kind == PhaseMode::Kind::exact && !problem.has_closed_phase())
    throw std::invalid_argument("problem has no closed-form phase; use quadrature (cc:N)");
}

PhaseValue PhaseProvider::increment(double x0, double x1) const {
  if (x0 == x1) return {};
  const Problem& p = *problem_;
  if (mode_.kind == PhaseMode::Kind::exact) {
    const double lo = std::min(x0, x1), hi = std::max(x0, x1);
    if (p.field.eval(lo) < p.tau_guard || p.field.eval(hi) < p.tau_guard)
      throw WkbInadmissible("phase: a(x) below guard");
    const long double s = p.phase_antiderivative(x1) - p.phase_antiderivative(x0);
    return PhaseValue::from_long_double(s);
  }
  const double eps2 = p.epsilon * p.epsilon;
  const double v = rule_.integrate(
      [&p, eps2](double y) {
        const double a = p.field.eval(y);
        if (a < p.tau_guard) throw WkbInadmissible("phase: a(x) below guard at quadrature node");
        return std::sqrt(a) - eps2 * eval_b(p, y);
      },
      x0, x1);
  return {v, 0.0};
}

void PhaseProvider::advance(double x_next, const PhaseValue& s) {
  accumulated_ += s;
  x_ = x_next;
}

void PhaseProvider::rebase(double x) {
  x_ref_ = x;
  x_ = x;
  accumulated_ = {};
}

PhaseValue PhaseProvider::phase_at(double x) const { return accumulated_ + increment(x_, x); }

cplx PhaseProvider::reduced_exponential(double x) const {
  return unit_phase(phase_at(x), problem_->epsilon, 1);
}

}  // namespace wkb

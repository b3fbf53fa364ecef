#pragma once

#include <functional>
#include <string>
#include <vector>

#include "wkbsolve/problem.hpp"

namespace wkb {

// Phase as an unevaluated sum hi + lo (double-double), so that phases of
// order 1e12 keep their fractional digits.
struct PhaseValue {
  double hi = 0.0;
  double lo = 0.0;

  double value() const { return hi + lo; }
  static PhaseValue from_long_double(long double v);

  PhaseValue& operator+=(const PhaseValue& o);
  friend PhaseValue operator+(PhaseValue a, const PhaseValue& b) { return a += b; }
  friend PhaseValue operator-(const PhaseValue& a) { return {-a.hi, -a.lo}; }
  friend PhaseValue operator-(PhaseValue a, const PhaseValue& b) { return a += -b; }
};

/// exp(i * multiple * phase / eps), with the argument reduced modulo 2*pi
/// before the trigonometric evaluation.
cplx unit_phase(const PhaseValue& phase, double eps, int multiple = 1);

// Clenshaw-Curtis rule on Chebyshev-Lobatto points; `nodes` >= 2 points,
// exact for polynomials of degree <= nodes - 1.
class ClenshawCurtisRule {
 public:
  explicit ClenshawCurtisRule(int nodes);

  double integrate(const std::function<double(double)>& f, double a, double b) const;

  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }  // on [-1, 1]
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// One-shot Clenshaw-Curtis integral of f over [a, b] with `nodes` points.
/// Throws std::domain_error on a non-finite integrand value.
double clenshaw_curtis(const std::function<double(double)>& f, double a, double b, int nodes);

struct PhaseMode {
  enum class Kind { exact, quadrature };
  Kind kind = Kind::exact;
  int nodes = 15;

  static PhaseMode exact() { return {Kind::exact, 15}; }
  static PhaseMode quadrature(int nodes = 15) { return {Kind::quadrature, nodes}; }
  // "exact" or "cc:N"
  static PhaseMode parse(const std::string& text);
  std::string str() const;
};

// Running phase phi^eps(x) - phi^eps(x_ref) of one solve. Not shareable
// between solves.
class PhaseProvider {
 public:
  PhaseProvider(const Problem& problem, PhaseMode mode, double x_ref,
                PhaseValue offset = {});

  /// s = phi^eps(x1) - phi^eps(x0). Throws WkbInadmissible when a(x) falls
  /// below the problem's tau_guard.
  PhaseValue increment(double x0, double x1) const;

  /// Position and accumulated phase of the provider.
  double position() const { return x_; }
  PhaseValue accumulated() const { return accumulated_; }
  double reference() const { return x_ref_; }
  const PhaseMode& mode() const { return mode_; }

  /// Move to x_next, adding the increment s over [position(), x_next].
  void advance(double x_next, const PhaseValue& s);

  /// Restart the gauge at x (used after steps where no increment exists).
  void rebase(double x);

  /// Phase at x relative to the reference point.
  PhaseValue phase_at(double x) const;

  /// exp(i phi^eps(x) / eps) from the accumulated phase.
  cplx reduced_exponential(double x) const;

 private:
  const Problem* problem_;
  PhaseMode mode_;
  ClenshawCurtisRule rule_;
  double x_ref_;
  double x_;
  PhaseValue accumulated_;
};

}  // namespace wkb

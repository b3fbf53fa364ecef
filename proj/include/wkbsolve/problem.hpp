#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "wkbsolve/jet.hpp"

namespace wkb {

using cplx = std::complex<double>;

// Solution sample: position with phi and its plain derivative phi'.
struct WaveState {
  double x = 0.0;
  cplx phi{};
  cplx dphi{};

  // Build from the (phi, eps*phi') convention.
  static WaveState from_scaled(double x, cplx phi, cplx eps_dphi, double eps) {
    return {x, phi, eps_dphi / eps};
  }
  cplx scaled_derivative(double eps) const { return eps * dphi; }
};

// Polynomial coefficient a(x) with its derivative tower up to order 5.
class CoefficientField {
 public:
  static constexpr int kMaxDerivative = 5;

  explicit CoefficientField(std::vector<double> coeffs, std::string description = {});

  // j-th derivative of a at x; throws std::out_of_range for j > 5.
  double eval(double x, int order = 0) const;

  // Taylor jet (a, a', a''/2, ...) at x with `terms` coefficients (<= 6).
  Jet jet(double x, int terms = kMaxDerivative + 1) const;

  const std::vector<double>& coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::string& description() const { return description_; }

 private:
  std::vector<double> coeffs_;
  std::string description_;
};

struct Domain {
  double start = 0.0;
  double end = 1.0;
};

// eps^2 phi'' + a(x) phi = 0 on [start, end] with initial state at start.
// Immutable once built; shared read-only between solves.
struct Problem {
  std::string kind;  // "airy", "pcf" or "poly"
  double epsilon = 1.0;
  CoefficientField field{{1.0}};
  Domain domain;
  WaveState initial;
  double tau_guard = 1e-12;
  // Antiderivative of sqrt(a) - eps^2 b, when known in closed form.
  std::function<long double(long double)> phase_antiderivative;
  // Exact (phi, phi') at x, when known.
  std::function<WaveState(double)> exact;

  bool has_closed_phase() const { return static_cast<bool>(phase_antiderivative); }
  bool has_exact() const { return static_cast<bool>(exact); }
  void validate() const;
};

/// a(x) = x; exact solution Ai(-x/eps^(2/3)) + i Bi(-x/eps^(2/3)), initial
/// data taken from it at domain.start.
Problem make_airy_problem(double epsilon, Domain domain = {0.1, 50.0});

/// a(x) = x - x^2/2 with the parabolic-cylinder exact solution.
Problem make_pcf_problem(double epsilon, Domain domain = {0.01, 1.99});

/// Arbitrary polynomial a(x) (ascending coefficients). A closed-form phase is
/// attached for degree <= 1; an exact solution for constant positive a.
Problem make_polynomial_problem(std::vector<double> coeffs, double epsilon, Domain domain,
                                WaveState initial);

// Parameters of the parabolic cylinder benchmark.
struct PcfParameters {
  double nu;
  double z_scale;  // z(x) = z_scale * (1 - x)
};
PcfParameters pcf_parameters(double epsilon);

}  // namespace wkb

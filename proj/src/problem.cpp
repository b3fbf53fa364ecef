#include "wkbsolve/problem.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "wkbsolve/special.hpp"

namespace wkb {

CoefficientField::CoefficientField(std::vector<double> coeffs, std::string description)
    : coeffs_(std::move(coeffs)), description_(std::move(description)) {
  if (coeffs_.empty()) throw std::invalid_argument("CoefficientField: empty coefficient list");
  while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double CoefficientField::eval(double x, int order) const {
  if (order < 0 || order > kMaxDerivative)
    throw std::out_of_range("CoefficientField: derivative order beyond the supported tower");
  return jet(x, order + 1).derivative_at(order);
}

Jet CoefficientField::jet(double x, int terms) const {
  if (terms < 1 || terms > kMaxDerivative + 1)
    throw std::out_of_range("CoefficientField: jet size beyond the supported tower");
  // Taylor shift of the polynomial to x, keeping `terms` coefficients.
  std::vector<double> a = coeffs_;
  const auto n = a.size();
  for (std::size_t i = 0; i + 1 < n && i < static_cast<std::size_t>(terms); ++i)
    for (std::size_t j = n - 1; j-- > i;) a[j] += x * a[j + 1];
  Jet out(terms);
  for (int k = 0; k < terms && k < static_cast<int>(n); ++k) out[k] = a[k];
  return out;
}

void Problem::validate() const {
  if (!(epsilon > 0)) throw std::invalid_argument("problem: epsilon must be positive");
  if (!(domain.start < domain.end)) throw std::invalid_argument("problem: empty domain");
  if (!(tau_guard > 0)) throw std::invalid_argument("problem: tau_guard must be positive");
}

Problem make_airy_problem(double epsilon, Domain domain) {
  if (!(epsilon > 0)) throw std::invalid_argument("airy problem: epsilon must be positive");
  Problem p;
  p.kind = "airy";
  p.epsilon = epsilon;
  p.field = CoefficientField({0.0, 1.0}, "a(x) = x");
  p.domain = domain;

  const double scale = std::cbrt(epsilon * epsilon);  // eps^(2/3)
  p.exact = [scale](double x) {
    if (x < 0) throw std::domain_error("airy exact solution: x must be >= 0");
    const auto q = airy_pair(x / scale);
    return WaveState{x, cplx(q.ai, q.bi), -cplx(q.dai, q.dbi) / scale};
  };
  const long double e2 = static_cast<long double>(epsilon) * epsilon;
  p.phase_antiderivative = [e2](long double x) {
    return 2 * x * std::sqrt(x) / 3 - 5 * e2 / (48 * x * std::sqrt(x));
  };
  p.initial = p.exact(domain.start);
  p.validate();
  return p;
}

PcfParameters pcf_parameters(double epsilon) {
  return {-1.0 / (std::sqrt(8.0) * epsilon), std::pow(2.0, 0.25) / std::sqrt(epsilon)};
}

Problem make_pcf_problem(double epsilon, Domain domain) {
  if (!(epsilon > 0)) throw std::invalid_argument("pcf problem: epsilon must be positive");
  Problem p;
  p.kind = "pcf";
  p.epsilon = epsilon;
  p.field = CoefficientField({0.0, 1.0, -0.5}, "a(x) = x - x^2/2");
  p.domain = domain;

  const auto [nu, c] = pcf_parameters(epsilon);
  const auto z0 = pcf_at_zero(nu);
  // U(nu, z) up to the common factor exp(z0.log_scale), which cancels in kappa * U.
  const cplx kappa =
      2.0 / cplx(z0.u, -std::sqrt(epsilon) * std::pow(2.0, 0.75) * z0.du);
  const double zlo = std::min(0.0, c * (1.0 - domain.end));
  const double zhi = std::max(0.0, c * (1.0 - domain.start));
  auto table = std::make_shared<const CheckpointTable>(std::vector<double>{nu, 0.0, 0.25}, 0.0,
                                                       LinearState{z0.u, z0.du}, zlo, zhi);
  p.exact = [table, kappa, c](double x) {
    const auto s = table->eval(c * (1.0 - x));
    const double u = static_cast<double>(s.w);
    const double du = static_cast<double>(s.dw);
    return WaveState{x, kappa * u, -kappa * c * du};
  };

  const long double e2 = static_cast<long double>(epsilon) * epsilon;
  p.phase_antiderivative = [e2](long double x) {
    const long double t = x - 1;
    const long double w = 1 - t * t;
    const long double rw = std::sqrt(w);
    const long double sqrt2 = std::sqrt(2.0L);
    const long double int_sqrt_a = (t * rw + std::asin(t)) / (2 * sqrt2);
    const long double int_b = -5 * 4 * sqrt2 / 32 * t * t * t / (3 * w * rw) -
                              2 * sqrt2 / 8 * t / rw;
    return int_sqrt_a - e2 * int_b;
  };
  p.initial = p.exact(domain.start);
  p.validate();
  return p;
}

Problem make_polynomial_problem(std::vector<double> coeffs, double epsilon, Domain domain,
                                WaveState initial) {
  Problem p;
  p.kind = "poly";
  p.epsilon = epsilon;
  p.field = CoefficientField(std::move(coeffs), "polynomial");
  p.domain = domain;
  p.initial = initial;
  p.initial.x = domain.start;
  p.validate();

  const auto& c = p.field.coeffs();
  const long double e2 = static_cast<long double>(epsilon) * epsilon;
  if (c.size() == 1 && c[0] > 0) {
    const long double k = std::sqrt(static_cast<long double>(c[0]));
    p.phase_antiderivative = [k](long double x) { return k * x; };

    // phi = A e^{i w x} + B e^{-i w x} through the initial state.
    const double w = std::sqrt(c[0]) / epsilon;
    const double x0 = p.initial.x;
    const cplx i(0.0, 1.0);
    const cplx ap = 0.5 * (p.initial.phi + p.initial.dphi / (i * w)) * std::exp(-i * w * x0);
    const cplx am = 0.5 * (p.initial.phi - p.initial.dphi / (i * w)) * std::exp(i * w * x0);
    p.exact = [ap, am, w, i](double x) {
      const cplx ep = std::exp(i * w * x), em = std::exp(-i * w * x);
      return WaveState{x, ap * ep + am * em, i * w * (ap * ep - am * em)};
    };
  } else if (c.size() == 2) {
    const long double c0 = c[0], c1 = c[1];
    p.phase_antiderivative = [c0, c1, e2](long double x) {
      const long double a = c0 + c1 * x;
      const long double ra = std::sqrt(a);
      return 2 * a * ra / (3 * c1) - e2 * 5 * c1 / (48 * a * ra);
    };
  }
  return p;
}

}  // namespace wkb

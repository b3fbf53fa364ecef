#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wkb {

class ContinuationError : public std::runtime_error {
 public:
  explicit ContinuationError(const std::string& what) : std::runtime_error(what) {}
};

// Ai, Ai', Bi, Bi' evaluated at the argument -t (oscillatory side).
struct AiryQuad {
  double ai = 0.0;
  double dai = 0.0;
  double bi = 0.0;
  double dbi = 0.0;
};

struct AsymCoeffs {
  double u = 1.0;
  double v = 1.0;
};

/// Coefficients u_k, v_k of the large-argument Airy expansions.
AsymCoeffs asymptotic_coeffs(int k);

/// Large-t expansions of Ai(-t), Ai'(-t), Bi(-t), Bi'(-t), keeping the
/// terms u_0 .. u_{2K+1} (resp. v) of each cos/sin series.
AiryQuad airy_asymptotic(double t, int K = 3);

// Value and first derivative of one solution of w'' = q(x) w.
struct LinearState {
  long double w = 0.0L;
  long double dw = 0.0L;
};

/// Analytic continuation of w'' = q(x) w (q polynomial, coefficients in
/// ascending order) from x0 to x1 by repeated Taylor expansion. Each step is
/// at most `max_step` long and is further limited so that step^2 * |q| <= 1
/// over the step; `terms` Taylor coefficients are summed per step.
/// Throws ContinuationError when a step's series tail is not negligible.
LinearState taylor_continuation(std::span<const double> q, double x0, LinearState init,
                                double x1, double max_step = 1.0, int terms = 30);

/// Read-only table of continuation checkpoints for one solution of
/// w'' = q(x) w on [lo, hi], spaced `spacing` apart around x0. Evaluation
/// continues from the nearest checkpoint.
class CheckpointTable {
 public:
  CheckpointTable(std::vector<double> q, double x0, LinearState init, double lo, double hi,
                  double spacing = 1.0);

  LinearState eval(double x) const;
  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  std::vector<double> q_;
  double x0_;
  double spacing_;
  double lo_;
  double hi_;
  long first_index_ = 0;
  std::vector<LinearState> points_;
};

/// Exact starting values at 0: Ai(0), Ai'(0), Bi(0), Bi'(0).
AiryQuad airy_at_zero();

/// Oracle path: continuation from 0 straight to -t, no checkpoints, no
/// asymptotics.
AiryQuad airy_by_continuation(double t);

// Thresholds of the hybrid evaluator (Airy argument -t).
inline constexpr double kAiryValueSwitch = 500.0;
inline constexpr double kAiryDerivativeSwitch = 400.0;
inline constexpr int kAiryAsymptoticOrder = 3;

/// Hybrid evaluator: continuation (from memoised checkpoints) for
/// t <= 500 (values) and t <= 400 (derivatives), asymptotics with K = 3
/// beyond.
AiryQuad airy_pair(double t);

/// Gamma function; throws std::domain_error at the poles.
double gamma_fn(double x);

// Parabolic cylinder function U(nu, z) and dU/dz, stored as
// exp(log_scale) * (u, du). The scale keeps values representable for
// strongly negative nu, where U grows factorially.
struct PcfValue {
  double u = 0.0;
  double du = 0.0;
  double log_scale = 0.0;
};

/// Closed-form U(nu, 0), U'(nu, 0) in scaled form.
PcfValue pcf_at_zero(double nu);

/// Scaled U(nu, z) by continuation of w'' = (z^2/4 + nu) w from z = 0.
PcfValue pcf_U_scaled(double nu, double z);

/// Unscaled (U, U'); may overflow for very negative nu.
std::pair<double, double> pcf_U(double nu, double z);

}  // namespace wkb

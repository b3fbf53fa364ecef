#pragma once

#include <vector>

#include "wkbsolve/control.hpp"
#include "wkbsolve/problem.hpp"

namespace wkb {

// One estimator/LTE comparison. The local truncation error belongs to the
// lower member of the pair, restarted from the exact solution at x0.
struct EstimatorSample {
  int index = 0;
  Method method = Method::wkb;
  double x0 = 0.0;
  double h = 0.0;
  double est = 0.0;
  double lte = 0.0;
  double deviation = 0.0;  // |est - lte| / lte
};

/// Replays the accepted non-RKF45 steps of an adaptive run from exact data.
std::vector<EstimatorSample> estimator_run(const Problem& problem, const SolverConfig& config);

/// Single steps of length h from x0 for each h. `method` is Method::wkb
/// (h-orders 1/2) or Method::rkwkb (WKB orders 2/3).
std::vector<EstimatorSample> estimator_hsweep(const Problem& problem, PhaseMode phase,
                                              Method method, double x0,
                                              const std::vector<double>& steps);

}  // namespace wkb

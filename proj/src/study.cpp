#include "wkbsolve/study.hpp"

#include <cmath>
#include <stdexcept>

#include "wkbsolve/metrics.hpp"

namespace wkb {

namespace {

EstimatorSample sample(const Problem& problem, const PhaseProvider& provider, Method method,
                       double x0, double h) {
  const WaveState start = exact_solution(problem, x0);
  const StepPair pair = method == Method::wkb ? wkb_pair(problem, provider, {}, start, h)
                                              : rkwkb_pair(problem, provider, start, h);
  const WaveState ref = exact_solution(problem, x0 + h);
  EstimatorSample s;
  s.method = method;
  s.x0 = x0;
  s.h = h;
  s.est = estimate_error(pair.low, pair.high);
  s.lte = estimate_error(pair.low, ref);
  s.deviation = std::abs(s.est - s.lte) / s.lte;
  return s;
}

}  // namespace

std::vector<EstimatorSample> estimator_run(const Problem& problem, const SolverConfig& config) {
  const Trajectory traj = integrate(problem, config);
  PhaseProvider provider(problem, config.phase, problem.domain.start);
  std::vector<EstimatorSample> out;
  double x_prev = traj.initial.x;
  for (const auto& rec : traj.steps) {
    if (rec.method != Method::rkf45) {
      EstimatorSample s = sample(problem, provider, rec.method, x_prev, rec.x - x_prev);
      s.index = rec.index;
      out.push_back(s);
    }
    x_prev = rec.x;
  }
  return out;
}

std::vector<EstimatorSample> estimator_hsweep(const Problem& problem, PhaseMode phase,
                                              Method method, double x0,
                                              const std::vector<double>& steps) {
  if (method == Method::rkf45) throw std::invalid_argument("estimator_hsweep: WKB methods only");
  PhaseProvider provider(problem, phase, x0);
  std::vector<EstimatorSample> out;
  int i = 0;
  for (double h : steps) {
    EstimatorSample s = sample(problem, provider, method, x0, h);
    s.index = i++;
    out.push_back(s);
  }
  return out;
}

}  // namespace wkb

#include "wkbsolve/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace wkb {

WaveState exact_solution(const Problem& problem, double x) {
  if (!problem.has_exact()) throw std::invalid_argument("problem has no exact solution");
  return problem.exact(x);
}

GlobalError global_error(const std::vector<WaveState>& states, const Problem& problem,
                         ErrorNorm norm) {
  GlobalError g;
  double num = 0.0, den = 0.0;
  for (const auto& s : states) {
    const cplx ref = exact_solution(problem, s.x).phi;
    const double diff = std::abs(s.phi - ref);
    const double mag = std::abs(ref);
    ++g.nodes;
    if (norm == ErrorNorm::sup) {
      if (mag == 0.0) {
        ++g.skipped;
        continue;
      }
      g.value = std::max(g.value, diff / mag);
    } else {
      num += diff * diff;
      den += mag * mag;
    }
  }
  if (norm == ErrorNorm::l2rel) {
    if (den == 0.0) throw std::domain_error("global_error: exact solution vanishes on all nodes");
    g.value = std::sqrt(num / den);
  }
  return g;
}

GlobalError global_error(const Trajectory& traj, const Problem& problem, ErrorNorm norm) {
  std::vector<WaveState> states;
  states.reserve(traj.steps.size());
  for (const auto& r : traj.steps) states.push_back(r.state);
  return global_error(states, problem, norm);
}

std::vector<cplx> transmission_map(const WaveState& at_one, double k1,
                                   const std::vector<WaveState>& samples) {
  if (!(k1 > 0.0)) throw std::invalid_argument("transmission_map: k1 must be positive");
  const cplx i(0.0, 1.0);
  const cplx denom = at_one.dphi - i * k1 * at_one.phi;
  if (std::abs(denom) == 0.0) throw std::domain_error("transmission_map: vanishing denominator");
  const cplx factor = -2.0 * i * k1 / denom;
  std::vector<cplx> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(factor * s.phi);
  return out;
}

}  // namespace wkb

#pragma once

#include <vector>

#include "wkbsolve/control.hpp"
#include "wkbsolve/problem.hpp"

namespace wkb {

/// Exact (phi, phi') of a benchmark problem; throws std::invalid_argument
/// when the problem carries no exact solution.
WaveState exact_solution(const Problem& problem, double x);

enum class ErrorNorm { sup, l2rel };

struct GlobalError {
  double value = 0.0;
  int skipped = 0;  // nodes with vanishing exact value (sup norm only)
  int nodes = 0;
};

/// Relative error of phi over the accepted nodes of a trajectory.
GlobalError global_error(const Trajectory& traj, const Problem& problem, ErrorNorm norm);
GlobalError global_error(const std::vector<WaveState>& states, const Problem& problem,
                         ErrorNorm norm);

/// psi_E(x) = -2i k1 / (phi'(1) - i k1 phi(1)) * phi(x) for each sample.
std::vector<cplx> transmission_map(const WaveState& at_one, double k1,
                                   const std::vector<WaveState>& samples);

}  // namespace wkb

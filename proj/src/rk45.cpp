#include "wkbsolve/rk45.hpp"

#include <array>
#include <cmath>

#include "wkbsolve/errors.hpp"

namespace wkb {

namespace {

// Fehlberg tableau
constexpr std::array<double, 6> kC = {0.0, 1.0 / 4, 3.0 / 8, 12.0 / 13, 1.0, 1.0 / 2};
constexpr double kA[6][5] = {
    {0, 0, 0, 0, 0},
    {1.0 / 4, 0, 0, 0, 0},
    {3.0 / 32, 9.0 / 32, 0, 0, 0},
    {1932.0 / 2197, -7200.0 / 2197, 7296.0 / 2197, 0, 0},
    {439.0 / 216, -8.0, 3680.0 / 513, -845.0 / 4104, 0},
    {-8.0 / 27, 2.0, -3544.0 / 2565, 1859.0 / 4104, -11.0 / 40},
};
constexpr std::array<double, 6> kB4 = {25.0 / 216, 0, 1408.0 / 2565, 2197.0 / 4104, -1.0 / 5, 0};
constexpr std::array<double, 6> kB5 = {16.0 / 135,     0,           6656.0 / 12825,
                                       28561.0 / 56430, -9.0 / 50, 2.0 / 55};

struct Y {
  cplx phi;
  cplx dphi;
};

}  // namespace

RKPair rkf45_step(const Problem& problem, const WaveState& state, double h) {
  const double inv_e2 = 1.0 / (problem.epsilon * problem.epsilon);
  std::array<Y, 6> k;
  for (int s = 0; s < 6; ++s) {
    Y y{state.phi, state.dphi};
    for (int j = 0; j < s; ++j) {
      y.phi += h * kA[s][j] * k[j].phi;
      y.dphi += h * kA[s][j] * k[j].dphi;
    }
    const double a = problem.field.eval(state.x + kC[s] * h);
    k[s] = {y.dphi, -a * inv_e2 * y.phi};
    if (!std::isfinite(std::abs(k[s].phi)) || !std::isfinite(std::abs(k[s].dphi)))
      throw SolverError("rkf45: non-finite right-hand side");
  }
  RKPair out;
  out.y4 = out.y5 = state;
  out.y4.x = out.y5.x = state.x + h;
  for (int s = 0; s < 6; ++s) {
    out.y4.phi += h * kB4[s] * k[s].phi;
    out.y4.dphi += h * kB4[s] * k[s].dphi;
    out.y5.phi += h * kB5[s] * k[s].phi;
    out.y5.dphi += h * kB5[s] * k[s].dphi;
  }
  return out;
}

}  // namespace wkb

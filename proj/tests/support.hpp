#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "wkbsolve/problem.hpp"

namespace wkb::test {

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
inline double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

inline double state_rel(const WaveState& a, const WaveState& b) {
  const double scale = std::max(std::abs(b.phi), std::abs(b.dphi));
  return std::max(std::abs(a.phi - b.phi), std::abs(a.dphi - b.dphi)) / scale;
}

// Derivative by central differences with `levels` Richardson refinements.
template <class F>
auto richardson_derivative(F f, double x, double h, int levels = 3) {
  using T = decltype(f(x));
  std::vector<std::vector<T>> d(levels);
  for (int i = 0; i < levels; ++i) {
    const double hi = h / (1 << i);
    d[i].push_back((f(x + hi) - f(x - hi)) / (2 * hi));
    double p = 4.0;
    for (int j = 1; j <= i; ++j, p *= 4.0) d[i].push_back(d[i][j - 1] + (d[i][j - 1] - d[i - 1][j - 1]) / (p - 1));
  }
  return d.back().back();
}

// Deterministic generator for property tests.
struct Rng {
  std::mt19937_64 gen;
  explicit Rng(unsigned seed) : gen(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
  cplx complex(double r = 1.0) { return {uniform(-r, r), uniform(-r, r)}; }
};

}  // namespace wkb::test

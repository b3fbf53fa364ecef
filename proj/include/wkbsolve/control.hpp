#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "wkbsolve/phase.hpp"
#include "wkbsolve/problem.hpp"

namespace wkb {

enum class Method { rkf45, wkb, rkwkb };

enum class SolverMode { wkb_rkf45, rkwkb_mod, rkwkb_original, rkf45_only };

std::string to_string(Method m);
std::string to_string(SolverMode m);
// Accepts "wkb+rkf45", "rkwkbmod", "rkwkb", "rkf45".
SolverMode parse_mode(const std::string& text);

struct SolverConfig {
  double tol = 1e-6;
  double eta = 1e-2;
  double theta_min = 0.5;
  double theta_max = 2.0;
  double safety = 0.9;
  double h_initial = 0.5;
  SolverMode mode = SolverMode::wkb_rkf45;
  PhaseMode phase = PhaseMode::exact();
  int max_rejections = 25;
  bool clamp_end = true;
  PhaseValue phase_offset{};  // gauge of the running phase at x_start

  double atol() const { return eta * tol; }
  double rtol() const { return tol; }
  void validate() const;
};

// Two results of adjacent order on one trial step. `increment` is the phase
// increment when one was computed.
struct StepPair {
  Method method = Method::rkf45;
  int order = 4;  // lower order k of the pair
  WaveState low;
  WaveState high;
  std::optional<PhaseValue> increment;
};

/// WKB schemes of h-order 1 and 2 from `state` over [x, x + h]. The running
/// phase at state.x is `phase`. Throws WkbInadmissible.
StepPair wkb_pair(const Problem& problem, const PhaseProvider& provider, const PhaseValue& phase,
                  const WaveState& state, double h);
/// RKWKB steps with WKB orders 2 and 3.
StepPair rkwkb_pair(const Problem& problem, const PhaseProvider& provider,
                    const WaveState& state, double h);
StepPair rkf45_pair(const Problem& problem, const WaveState& state, double h);

/// sup norm over component moduli of Y_k - Y_{k+1}.
double estimate_error(const WaveState& yk, const WaveState& yk1);

double state_norm(const WaveState& y);

/// Elementary controller factor with the [theta_min, theta_max] clamps.
double proposal_factor(double est, double ynorm, const SolverConfig& config, int k);

struct CandidateInfo {
  Method method = Method::rkf45;
  bool admissible = true;
  bool accepted = false;
  double est = 0.0;
  double theta = 0.5;
  double ynorm = 0.0;
};

struct Selection {
  double theta = 0.5;
  int chosen = -1;  // index of the chosen candidate, -1 when all rejected
  bool accepted() const { return chosen >= 0; }
};

/// Switching rule: the accepted candidate with the largest theta wins; when
/// none is accepted theta is the largest proposal.
Selection select_method(const std::vector<CandidateInfo>& candidates);

struct StepRecord {
  int index = 0;
  double x = 0.0;  // end of the step
  double h = 0.0;
  Method method = Method::rkf45;
  bool accepted = false;
  bool clamped = false;
  double est = 0.0;
  double theta = 0.0;
  double ynorm = 0.0;
  WaveState state;
  std::vector<CandidateInfo> candidates;
};

struct Trajectory {
  WaveState initial;
  std::vector<StepRecord> steps;     // accepted only
  std::vector<StepRecord> attempts;  // every trial, in order
  int accepted = 0;
  int rejected = 0;
  std::array<int, 3> per_method{};  // accepted steps by Method
  WaveState final_state;

  int count(Method m) const { return per_method[static_cast<int>(m)]; }
};

/// March from domain.start to domain.end. Throws SolverError after too many
/// consecutive rejections or when h underflows.
Trajectory integrate(const Problem& problem, const SolverConfig& config);

/// Controller disabled: march the WKB scheme of the given h-order (1 or 2)
/// through the grid points and return the state at each of them. `offset` is
/// the gauge of the running phase at the first grid point.
std::vector<WaveState> wkb_fixed_grid(const Problem& problem, PhaseMode phase, int order,
                                      const std::vector<double>& grid, PhaseValue offset = {});

}  // namespace wkb

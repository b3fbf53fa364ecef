#include "wkbsolve/control.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "wkbsolve/errors.hpp"
#include "wkbsolve/rk45.hpp"
#include "wkbsolve/rkwkb.hpp"
#include "wkbsolve/wkb.hpp"

namespace wkb {

namespace {

constexpr double kUnderflow = 1e-14;    // relative to the interval length
constexpr double kEndSnap = 1e-12;      // remainder folded into the last step
constexpr double kOriginalGrowth = 5.0; // original controller with est == 0

struct Candidate {
  CandidateInfo info;
  std::optional<StepPair> pair;
};

Candidate evaluate(const SolverConfig& config, Method method, int k,
                   const std::function<StepPair()>& run) {
  Candidate c;
  c.info.method = method;
  try {
    c.pair = run();
  } catch (const WkbInadmissible&) {
    c.info.admissible = false;
    c.info.accepted = false;
    c.info.theta = config.theta_min;
    c.info.est = std::numeric_limits<double>::infinity();
    return c;
  }
  c.info.est = estimate_error(c.pair->low, c.pair->high);
  c.info.ynorm = state_norm(c.pair->high);
  if (!std::isfinite(c.info.est)) {
    c.info.accepted = false;
    c.info.theta = config.theta_min;
    return c;
  }
  c.info.theta = proposal_factor(c.info.est, c.info.ynorm, config, k);
  c.info.accepted = c.info.est <= config.atol() + config.rtol() * c.info.ynorm;
  return c;
}

// smaller relative error wins, relative tolerance only, no clamps
Selection select_original(std::vector<Candidate>& cands, const SolverConfig& config) {
  Selection sel;
  double best = std::numeric_limits<double>::infinity();
  int best_i = -1;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    auto& c = cands[i];
    if (!c.info.admissible || !std::isfinite(c.info.est)) continue;
    const double rel = c.info.ynorm > 0.0 ? c.info.est / c.info.ynorm : c.info.est;
    const int k = c.pair->order;
    c.info.accepted = rel <= config.rtol();
    c.info.theta = rel == 0.0 ? kOriginalGrowth
                              : config.safety * std::pow(config.rtol() / rel, 1.0 / (k + 1));
    if (rel < best) {
      best = rel;
      best_i = static_cast<int>(i);
    }
  }
  if (best_i < 0) {
    sel.theta = config.theta_min;
    return sel;
  }
  sel.theta = cands[best_i].info.theta;
  if (cands[best_i].info.accepted) sel.chosen = best_i;
  return sel;
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::rkf45: return "RKF45";
    case Method::wkb: return "WKB";
    case Method::rkwkb: return "RKWKB";
  }
  return "?";
}

std::string to_string(SolverMode m) {
  switch (m) {
    case SolverMode::wkb_rkf45: return "wkb+rkf45";
    case SolverMode::rkwkb_mod: return "rkwkbmod";
    case SolverMode::rkwkb_original: return "rkwkb";
    case SolverMode::rkf45_only: return "rkf45";
  }
  return "?";
}

SolverMode parse_mode(const std::string& text) {
  if (text == "wkb+rkf45") return SolverMode::wkb_rkf45;
  if (text == "rkwkbmod") return SolverMode::rkwkb_mod;
  if (text == "rkwkb") return SolverMode::rkwkb_original;
  if (text == "rkf45") return SolverMode::rkf45_only;
  throw std::invalid_argument("unknown method '" + text + "'");
}

void SolverConfig::validate() const {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  if (!(theta_min > 0.0 && theta_min < 1.0 && theta_max > 1.0))
    throw std::invalid_argument("need 0 < theta_min < 1 < theta_max");
  if (!(safety > 0.0 && safety < 1.0)) throw std::invalid_argument("safety must be in (0, 1)");
  if (!(h_initial > 0.0)) throw std::invalid_argument("initial step must be positive");
  if (max_rejections < 1) throw std::invalid_argument("max_rejections must be >= 1");
}

StepPair wkb_pair(const Problem& problem, const PhaseProvider& provider, const PhaseValue& phase,
                  const WaveState& state, double h) {
  const double x1 = state.x + h;
  const PhaseValue s = provider.increment(state.x, x1);
  const ZState z = to_Z(problem, state, phase);
  const WkbPair p = wkb_step(problem, z, x1, s);
  StepPair out;
  out.method = Method::wkb;
  out.order = 1;
  out.low = from_Z(problem, p.first);
  out.high = from_Z(problem, p.second);
  out.increment = s;
  return out;
}

StepPair rkwkb_pair(const Problem& problem, const PhaseProvider& provider,
                    const WaveState& state, double h) {
  const PhaseValue s = provider.increment(state.x, state.x + h);
  StepPair out;
  out.method = Method::rkwkb;
  out.order = 1;
  out.low = rkwkb_step(problem, state, h, 2, s);
  out.high = rkwkb_step(problem, state, h, 3, s);
  out.increment = s;
  return out;
}

StepPair rkf45_pair(const Problem& problem, const WaveState& state, double h) {
  const RKPair p = rkf45_step(problem, state, h);
  StepPair out;
  out.method = Method::rkf45;
  out.order = 4;
  out.low = p.y4;
  out.high = p.y5;
  return out;
}

double estimate_error(const WaveState& yk, const WaveState& yk1) {
  return std::max(std::abs(yk.phi - yk1.phi), std::abs(yk.dphi - yk1.dphi));
}

double state_norm(const WaveState& y) { return std::max(std::abs(y.phi), std::abs(y.dphi)); }

double proposal_factor(double est, double ynorm, const SolverConfig& config, int k) {
  if (est <= 0.0) return config.theta_max;
  const double ratio = (config.atol() + config.rtol() * ynorm) / est;
  const double t = config.safety * std::pow(ratio, 1.0 / (k + 1));
  return std::max(config.theta_min, std::min(config.theta_max, t));
}

Selection select_method(const std::vector<CandidateInfo>& candidates) {
  Selection sel;
  double best_any = -1.0, best_acc = -1.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& c = candidates[i];
    best_any = std::max(best_any, c.theta);
    if (c.accepted && c.theta > best_acc) {
      best_acc = c.theta;
      sel.chosen = static_cast<int>(i);
    }
  }
  sel.theta = sel.accepted() ? best_acc : best_any;
  return sel;
}

Trajectory integrate(const Problem& problem, const SolverConfig& config) {
  problem.validate();
  config.validate();
  const double start = problem.domain.start, end = problem.domain.end;
  const double span = end - start;

  std::optional<PhaseProvider> provider;
  if (config.mode != SolverMode::rkf45_only)
    provider.emplace(problem, config.phase, start, config.phase_offset);

  Trajectory traj;
  WaveState y = problem.initial;
  y.x = start;
  traj.initial = y;
  double h = config.h_initial;
  int consecutive = 0;
  int attempt = 0;

  while (y.x < end) {
    double x_next = y.x + h;
    bool clamped = false;
    if (config.clamp_end && x_next >= end - kEndSnap * span) {
      x_next = end;
      clamped = true;
    }
    const double hs = x_next - y.x;
    if (!(hs >= kUnderflow * span)) throw SolverError("step size underflow at x = " + std::to_string(y.x));

    std::vector<Candidate> cands;
    switch (config.mode) {
      case SolverMode::wkb_rkf45: {
        const PhaseValue phase = provider->accumulated();
        cands.push_back(evaluate(config, Method::wkb, 1, [&] {
          return wkb_pair(problem, *provider, phase, y, hs);
        }));
        break;
      }
      case SolverMode::rkwkb_mod:
      case SolverMode::rkwkb_original:
        cands.push_back(evaluate(config, Method::rkwkb, 1, [&] {
          return rkwkb_pair(problem, *provider, y, hs);
        }));
        break;
      case SolverMode::rkf45_only:
        break;
    }
    cands.push_back(evaluate(config, Method::rkf45, 4, [&] { return rkf45_pair(problem, y, hs); }));

    Selection sel;
    if (config.mode == SolverMode::rkwkb_original) {
      sel = select_original(cands, config);
    } else {
      std::vector<CandidateInfo> infos;
      for (const auto& c : cands) infos.push_back(c.info);
      sel = select_method(infos);
    }

    StepRecord rec;
    rec.index = attempt++;
    rec.x = x_next;
    rec.h = hs;
    rec.clamped = clamped;
    rec.accepted = sel.accepted();
    rec.theta = sel.theta;
    for (const auto& c : cands) rec.candidates.push_back(c.info);
    const int shown = sel.accepted() ? sel.chosen : 0;
    rec.method = cands[shown].info.method;
    rec.est = cands[shown].info.est;
    rec.ynorm = cands[shown].info.ynorm;

    if (sel.accepted()) {
      const Candidate& c = cands[sel.chosen];
      y = c.pair->high;
      y.x = x_next;
      rec.state = y;
      rec.index = traj.accepted;
      if (provider) {
        std::optional<PhaseValue> s;
        for (const auto& other : cands)
          if (other.pair && other.pair->increment) s = other.pair->increment;
        if (s)
          provider->advance(x_next, *s);
        else
          provider->rebase(x_next);
      }
      traj.steps.push_back(rec);
      ++traj.accepted;
      ++traj.per_method[static_cast<int>(c.info.method)];
      consecutive = 0;
    } else {
      rec.state = y;
      ++traj.rejected;
      if (++consecutive > config.max_rejections)
        throw SolverError("too many consecutive rejections at x = " + std::to_string(y.x));
    }
    traj.attempts.push_back(std::move(rec));
    h = sel.theta * hs;
  }
  traj.final_state = y;
  return traj;
}

std::vector<WaveState> wkb_fixed_grid(const Problem& problem, PhaseMode phase, int order,
                                      const std::vector<double>& grid, PhaseValue offset) {
  if (order != 1 && order != 2) throw std::invalid_argument("wkb_fixed_grid: order must be 1 or 2");
  if (grid.size() < 2) throw std::invalid_argument("wkb_fixed_grid: need at least two points");
  WaveState y0;
  if (problem.initial.x == grid.front()) {
    y0 = problem.initial;
  } else if (problem.has_exact()) {
    y0 = problem.exact(grid.front());
  } else {
    throw std::invalid_argument("wkb_fixed_grid: no initial state at the first grid point");
  }
  PhaseProvider provider(problem, phase, grid.front(), offset);
  ZState z = to_Z(problem, y0, provider.accumulated());
  std::vector<WaveState> out{y0};
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const PhaseValue s = provider.increment(grid[i - 1], grid[i]);
    const WkbPair p = wkb_step(problem, z, grid[i], s);
    z = order == 1 ? p.first : p.second;
    provider.advance(grid[i], s);
    out.push_back(from_Z(problem, z));
  }
  return out;
}

}  // namespace wkb

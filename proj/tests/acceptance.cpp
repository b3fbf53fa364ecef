// Acceptance checks: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "wkbsolve/control.hpp"
#include "wkbsolve/metrics.hpp"
#include "wkbsolve/phase.hpp"
#include "wkbsolve/special.hpp"
#include "wkbsolve/study.hpp"
#include "wkbsolve/wkb.hpp"

using namespace wkb;

namespace {

// pinned tolerances
constexpr double kCountBand = 0.5;             // +-50% around reference step counts
constexpr int kLongRunMaxSteps = 80;
constexpr double kLongRunErr = 1e-5;
constexpr double kLongRunSplit = 1e6;
constexpr double kFloorFactor = 10.0;
constexpr double kMachineEps = std::numeric_limits<double>::epsilon();
constexpr double kMiddleLo = 2.0 / 3, kMiddleHi = 4.0 / 3;
constexpr double kMiddleShare = 0.5;
constexpr double kEstDeviation = 0.5;
constexpr double kSweepDeviation = 1e-2;
constexpr double kSweepSmallH = 1.0 / 16;
constexpr double kOrder1Lo = 0.8, kOrder1Hi = 1.3;
constexpr double kOrder2Lo = 1.8, kOrder2Hi = 2.4;
constexpr double kRkGrowthLo = 5.0, kRkGrowthHi = 20.0;
constexpr double kRatioLo = 0.5, kRatioHi = 2.0;
constexpr double kRatioSlack = 1e-12;
constexpr double kConstEst = 1e-13;
constexpr double kAiryOracle = 1e-9;
constexpr double kAiryWronskian = 1e-10;
constexpr double kPcfResidual = 1e-10;
constexpr double kCoeffTol = 1e-15;
constexpr double kCcPhase = 1e-12;
constexpr double kPhaseErrFactor = 2.0;
constexpr double kRoundTrip = 1e-14;
constexpr double kNormTol = 1e-13;
constexpr double kGauge = 1e-12;
constexpr double kWronskianDrift = 100.0;  // times Tol

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

bool within_band(int got, int ref) { return std::abs(got - ref) <= kCountBand * ref; }

Trajectory run(const Problem& p, SolverMode mode, double tol, double h0, PhaseMode phase = PhaseMode::exact()) {
  SolverConfig c;
  c.mode = mode;
  c.tol = tol;
  c.h_initial = h0;
  c.phase = phase;
  return integrate(p, c);
}

double rel_phi(const Problem& p, const WaveState& s) {
  const cplx ex = p.exact(s.x).phi;
  return std::abs(s.phi - ex) / std::abs(ex);
}

Outcome step_counts(const Problem& p, double h0, const int (&ref_hybrid)[3], const int (&ref_rkwkb)[3],
                    bool need_fewer, std::vector<Trajectory>* keep = nullptr) {
  Outcome o;
  const double tols[3] = {1e-3, 1e-6, 1e-9};
  for (int i = 0; i < 3; ++i) {
    const Trajectory a = run(p, SolverMode::wkb_rkf45, tols[i], h0);
    const Trajectory b = run(p, SolverMode::rkwkb_mod, tols[i], h0);
    o.pass &= within_band(a.accepted, ref_hybrid[i]) && within_band(b.accepted, ref_rkwkb[i]);
    if (need_fewer) o.pass &= a.accepted < b.accepted;
    o.detail += "Tol=" + fmt("%g", tols[i]) + " wkb+rkf45 " + std::to_string(a.accepted) + "/" +
                std::to_string(ref_hybrid[i]) + " rkwkbmod " + std::to_string(b.accepted) + "/" +
                std::to_string(ref_rkwkb[i]) + "; ";
    if (keep) keep->push_back(a);
  }
  return o;
}

Outcome criterion1() {
  const Problem p = make_airy_problem(1.0, {0.1, 50.0});
  return step_counts(p, 0.5, {12, 77, 856}, {16, 171, 2352}, true);
}

Outcome criterion2() {
  const Problem p = make_airy_problem(1.0, {0.1, 1e8});
  const Trajectory t = run(p, SolverMode::wkb_rkf45, 1e-5, 0.5);
  double near = 0.0, far_excess = 0.0;
  for (const auto& s : t.steps) {
    const double e = rel_phi(p, s.state);
    if (s.x <= kLongRunSplit) {
      near = std::max(near, e);
    } else {
      // floor 10 * eps_mach * x^{3/2} / eps, never tighter than the near-field bound
      const double bound = std::max(kLongRunErr, kFloorFactor * kMachineEps * std::pow(s.x, 1.5) / p.epsilon);
      far_excess = std::max(far_excess, e / bound);
    }
  }
  Outcome o;
  o.pass = t.accepted <= kLongRunMaxSteps && near <= kLongRunErr && far_excess <= 1.0;
  o.detail = std::to_string(t.accepted) + " steps, sup rel err (x<=1e6) " + fmt("%.3g", near) +
             ", worst err/bound beyond " + fmt("%.3g", far_excess);
  return o;
}

Outcome criterion3() {
  const Problem p = make_pcf_problem(std::ldexp(1.0, -6));
  std::vector<Trajectory> runs;
  Outcome o = step_counts(p, 0.05, {21, 166, 1287}, {26, 326, 1543}, false, &runs);
  // tags: RKF45 next to both turning points, WKB the majority in the middle third
  bool pattern = true;
  o.detail += "WKB share in middle third";
  for (const auto& t : runs) {
    pattern &= t.steps.front().method == Method::rkf45 && t.steps.back().method == Method::rkf45;
    int mid = 0, wkb_mid = 0;
    for (const auto& s : t.steps)
      if (s.x > kMiddleLo && s.x <= kMiddleHi) {
        ++mid;
        wkb_mid += s.method == Method::wkb;
      }
    const double share = mid > 0 ? static_cast<double>(wkb_mid) / mid : 0.0;
    pattern &= share > kMiddleShare;
    o.detail += " " + fmt("%.2f", share);
  }
  o.pass &= pattern;
  o.detail += pattern ? ", tag pattern ok" : ", tag pattern broken";
  return o;
}

Outcome criterion4() {
  const Problem p = make_airy_problem(1.0, {0.1, 50.0});
  SolverConfig c;
  c.tol = 1e-5;
  c.h_initial = 0.5;
  double worst = 0.0;
  int n = 0;
  for (const auto& s : estimator_run(p, c))
    if (s.method == Method::wkb) {
      worst = std::max(worst, s.deviation);
      ++n;
    }

  std::vector<double> hs;
  for (double h = 1.0; hs.size() < 14; h /= 2) hs.push_back(h);
  const auto sweep = estimator_hsweep(p, PhaseMode::exact(), Method::wkb, 10.0, hs);
  double small_worst = 0.0, best = std::numeric_limits<double>::infinity();
  for (const auto& s : sweep) {
    if (s.h <= kSweepSmallH) small_worst = std::max(small_worst, s.deviation);
    best = std::min(best, s.deviation);
  }
  const double first = sweep.front().deviation;

  Outcome o;
  o.pass = n > 0 && worst < kEstDeviation && small_worst < kSweepDeviation && best < first;
  o.detail = std::to_string(n) + " WKB steps, worst |est-lte|/lte " + fmt("%.3g", worst) + "; h-sweep " +
             fmt("%.3g", first) + " at h=1, max " + fmt("%.3g", small_worst) + " for h<=1/16";
  return o;
}

Outcome criterion5() {
  const Problem p = make_airy_problem(0.5, {1.0, 2.0});
  double order[2];
  for (int k : {1, 2}) {
    std::vector<double> err;
    for (int n : {8, 16, 32, 64, 128}) {
      std::vector<double> g(n + 1);
      for (int i = 0; i <= n; ++i) g[i] = 1.0 + static_cast<double>(i) / n;
      g[n] = 2.0;
      err.push_back(rel_phi(p, wkb_fixed_grid(p, PhaseMode::exact(), k, g).back()));
    }
    order[k - 1] = std::log2(err.front() / err.back()) / (err.size() - 1);
  }
  Outcome o;
  o.pass = order[0] >= kOrder1Lo && order[0] <= kOrder1Hi && order[1] >= kOrder2Lo && order[1] <= kOrder2Hi;
  o.detail = "observed orders " + fmt("%.3f", order[0]) + " and " + fmt("%.3f", order[1]);
  return o;
}

Outcome criterion6() {
  Outcome o;
  double prev = std::numeric_limits<double>::infinity();
  bool mono = true;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    const Problem p = make_airy_problem(eps, {0.1, 50.0});
    const double e = global_error(run(p, SolverMode::wkb_rkf45, 1e-6, 0.5), p, ErrorNorm::l2rel).value;
    mono &= e <= prev;
    prev = e;
    o.detail += "eps=" + fmt("%g", eps) + " l2rel " + fmt("%.3g", e) + "; ";
  }
  const Problem p1 = make_airy_problem(1.0, {0.1, 50.0}), p2 = make_airy_problem(0.1, {0.1, 50.0});
  const double r1 = global_error(run(p1, SolverMode::rkf45_only, 1e-6, 0.5), p1, ErrorNorm::l2rel).value;
  const double r2 = global_error(run(p2, SolverMode::rkf45_only, 1e-6, 0.5), p2, ErrorNorm::l2rel).value;
  const double growth = r2 / r1;
  o.pass = mono && growth >= kRkGrowthLo && growth <= kRkGrowthHi;
  o.detail += "RKF45 growth 1 -> 0.1: " + fmt("%.3g", growth);
  return o;
}

Outcome criterion7() {
  Outcome o;
  int steps = 0;
  bool eps_ok = true, ratio_ok = true;
  double lo = 10, hi = 0, pcf_acc_lo = 10, trial_lo = 10, trial_hi = 0;
  auto in_band = [](double r) { return r >= kRatioLo * (1 - kRatioSlack) && r <= kRatioHi * (1 + kRatioSlack); };
  for (auto mode : {SolverMode::wkb_rkf45, SolverMode::rkwkb_mod})
    for (double tol : {1e-3, 1e-6, 1e-9}) {
      for (const Problem& p : {make_airy_problem(1.0, {0.1, 50.0}), make_pcf_problem(std::ldexp(1.0, -6))}) {
        const bool pcf = p.kind == "pcf";
        SolverConfig c;
        c.mode = mode;
        c.tol = tol;
        c.h_initial = pcf ? 0.05 : 0.5;
        const Trajectory t = integrate(p, c);
        for (std::size_t i = 0; i < t.steps.size(); ++i) {
          const auto& s = t.steps[i];
          eps_ok &= s.est <= c.atol() + c.rtol() * s.ynorm;
          ++steps;
          if (i == 0 || s.clamped) continue;
          const double r = s.h / t.steps[i - 1].h;
          if (pcf) {
            pcf_acc_lo = std::min(pcf_acc_lo, r);
            continue;
          }
          lo = std::min(lo, r);
          hi = std::max(hi, r);
          ratio_ok &= in_band(r);
        }
        // with rejections in between, accepted-to-accepted ratios compound; each trial is still clamped
        if (pcf)
          for (std::size_t i = 1; i < t.attempts.size(); ++i) {
            if (t.attempts[i].clamped) continue;
            const double r = t.attempts[i].h / t.attempts[i - 1].h;
            trial_lo = std::min(trial_lo, r);
            trial_hi = std::max(trial_hi, r);
            ratio_ok &= in_band(r);
          }
      }
    }

  // constant coefficient: the WKB pair agrees to roundoff
  const double eps = 0.05;
  const Problem flat = make_polynomial_problem({2.0}, eps, {0.0, 20.0}, {0.0, 1.0, cplx(0.0, std::sqrt(2.0) / eps)});
  double const_est = 0.0;
  int wkb_steps = 0;
  for (double tol : {1e-3, 1e-6, 1e-9}) {
    const Trajectory t = run(flat, SolverMode::wkb_rkf45, tol, 0.01);
    for (const auto& s : t.steps)
      if (s.method == Method::wkb) {
        const_est = std::max(const_est, s.est);
        ++wkb_steps;
      }
  }
  o.pass = eps_ok && ratio_ok && wkb_steps > 0 && const_est <= kConstEst;
  o.detail = std::to_string(steps) + " accepted steps, EPS " + (eps_ok ? "ok" : "violated") + ", airy accepted ratios [" +
             fmt("%.3g", lo) + ", " + fmt("%.3g", hi) + "], pcf trial ratios [" + fmt("%.3g", trial_lo) + ", " +
             fmt("%.3g", trial_hi) + "] (accepted min " + fmt("%.3g", pcf_acc_lo) + "), constant-a WKB est max " + fmt("%.3g", const_est);
  return o;
}

Outcome criterion8() {
  double worst = 0.0, wr = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double t = 0.1 * std::pow(20000.0, i / 99.0);
    const AiryQuad h = airy_pair(t), c = airy_by_continuation(t);
    // relative to the modulus of each pair; pointwise relative error is undefined at the zeros
    const double mv = std::hypot(c.ai, c.bi), md = std::hypot(c.dai, c.dbi);
    worst = std::max({worst, std::abs(h.ai - c.ai) / mv, std::abs(h.bi - c.bi) / mv, std::abs(h.dai - c.dai) / md,
                      std::abs(h.dbi - c.dbi) / md});
    wr = std::max(wr, std::abs((h.ai * h.dbi - h.dai * h.bi) * std::numbers::pi - 1.0));
  }
  const auto c1 = asymptotic_coeffs(1);
  const bool coeffs = std::abs(c1.u - 5.0 / 72) <= kCoeffTol && std::abs(c1.v + 7.0 / 72) <= kCoeffTol;

  // PCF: U'' = (z^2/4 + nu) U with U'' from extrapolated differences of U'
  const double nu = -64.0 / std::sqrt(8.0);
  double res = 0.0;
  for (double z : {0.5, 1.0, 2.0, 4.0, 6.5}) {
    auto du = [nu](double s) { return pcf_U_scaled(nu, s).du; };
    double d[4][4];
    for (int i = 0; i < 4; ++i) {
      const double h = 1e-2 / (1 << i);
      d[i][0] = (du(z + h) - du(z - h)) / (2 * h);
      for (int j = 1, p = 4; j <= i; ++j, p *= 4) d[i][j] = d[i][j - 1] + (d[i][j - 1] - d[i - 1][j - 1]) / (p - 1);
    }
    const auto v = pcf_U_scaled(nu, z);
    const double q = z * z / 4 + nu;
    res = std::max(res, std::abs(d[3][3] - q * v.u) / std::hypot(q * v.u, std::sqrt(std::abs(q)) * v.du));
  }

  Outcome o;
  o.pass = worst <= kAiryOracle && wr <= kAiryWronskian && coeffs && res <= kPcfResidual;
  o.detail = "hybrid vs oracle " + fmt("%.3g", worst) + ", wronskian " + fmt("%.3g", wr) + ", u1/v1 " +
             (coeffs ? "ok" : "wrong") + ", pcf residual " + fmt("%.3g", res);
  return o;
}

Outcome criterion9() {
  const Problem p = make_airy_problem(1.0, {0.1, 1e8});
  const Trajectory t = run(p, SolverMode::wkb_rkf45, 1e-5, 0.5);
  PhaseProvider ex(p, PhaseMode::exact(), 0.1), cc(p, PhaseMode::quadrature(15), 0.1);
  double worst = 0.0, prev = t.initial.x;
  for (const auto& s : t.steps) {
    if (s.method == Method::wkb && s.x <= kLongRunSplit) {
      const double a = ex.increment(prev, s.x).value(), b = cc.increment(prev, s.x).value();
      worst = std::max(worst, std::abs(a - b) / std::abs(a));
    }
    prev = s.x;
  }
  const Trajectory tq = run(p, SolverMode::wkb_rkf45, 1e-5, 0.5, PhaseMode::quadrature(15));
  auto sup_to = [&](const Trajectory& tr) {
    double m = 0.0;
    for (const auto& s : tr.steps)
      if (s.x <= kLongRunSplit) m = std::max(m, rel_phi(p, s.state));
    return m;
  };
  const double e_exact = sup_to(t), e_cc = sup_to(tq);
  const double factor = std::max(e_exact / e_cc, e_cc / e_exact);
  Outcome o;
  o.pass = worst <= kCcPhase && factor < kPhaseErrFactor;
  o.detail = "cc15 vs closed form " + fmt("%.3g", worst) + ", sup err exact " + fmt("%.3g", e_exact) + " cc " +
             fmt("%.3g", e_cc);
  return o;
}

Outcome criterion10() {
  const Problem p = make_airy_problem(1.0, {0.1, 50.0});
  const Trajectory t = run(p, SolverMode::wkb_rkf45, 1e-5, 0.5);

  // U <-> Z on the states of the run with random phases
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> ph(-1e6, 1e6);
  double rt = 0.0, nrm = 0.0;
  for (const auto& s : t.steps) {
    const Vec2 u = to_U(p, s.state);
    const ZState z = to_Z(u, s.x, {ph(gen), 0.0}, p.epsilon);
    const Vec2 back = from_Z(z, p.epsilon);
    const double nu = std::hypot(std::abs(u[0]), std::abs(u[1]));
    const double nz = std::hypot(std::abs(z.z[0]), std::abs(z.z[1]));
    rt = std::max({rt, std::abs(back[0] - u[0]) / nu, std::abs(back[1] - u[1]) / nu});
    nrm = std::max(nrm, std::abs(nz - nu) / nu);
  }

  // gauge: the WKB march on the long run's grid under shifted phase references
  const Problem lp = make_airy_problem(1.0, {0.1, 1e8});
  const Trajectory lt = run(lp, SolverMode::wkb_rkf45, 1e-5, 0.5);
  std::vector<double> grid;
  for (std::size_t i = 1; i < lt.steps.size(); ++i)
    if (lt.steps[i].method == Method::wkb) {
      if (grid.empty()) grid.push_back(lt.steps[i - 1].x);
      grid.push_back(lt.steps[i].x);
    }
  double gauge = 0.0;
  const auto base = wkb_fixed_grid(lp, PhaseMode::exact(), 2, grid);
  for (double off : {1.0, 12345.678, 1e6 + 0.3}) {
    const auto shifted = wkb_fixed_grid(lp, PhaseMode::exact(), 2, grid, {off, 0.0});
    for (std::size_t i = 0; i < base.size(); ++i)
      gauge = std::max(gauge, std::abs(shifted[i].phi - base[i].phi) / std::abs(base[i].phi));
  }

  // Im(conj(phi) eps phi') is conserved by the exact flow
  auto w = [&](const WaveState& s) { return std::imag(std::conj(s.phi) * p.epsilon * s.dphi); };
  const double w0 = w(t.initial);
  double drift = 0.0;
  for (const auto& s : t.steps) drift = std::max(drift, std::abs(w(s.state) - w0));

  Outcome o;
  o.pass = rt <= kRoundTrip && nrm <= kNormTol && !grid.empty() && gauge <= kGauge && drift <= kWronskianDrift * 1e-5;
  o.detail = "round trip " + fmt("%.3g", rt) + ", norm " + fmt("%.3g", nrm) + ", gauge " + fmt("%.3g", gauge) +
             " on " + std::to_string(grid.size()) + " nodes, wronskian drift " + fmt("%.3g", drift);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4}, {5, criterion5},
      {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9}, {10, criterion10},
  };
  int failed = 0;
  for (const auto& [id, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    std::printf("criterion %2d: %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

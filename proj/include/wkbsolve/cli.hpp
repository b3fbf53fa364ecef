#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wkbsolve/control.hpp"
#include "wkbsolve/io.hpp"
#include "wkbsolve/metrics.hpp"

namespace wkb::cli {

enum ExitCode { kOk = 0, kFlagError = 2, kSolverFailure = 3 };

struct SolveOptions {
  ProblemSpec problem;
  SolverConfig config;
  std::string out_dir = ".";
};

struct SolveResult {
  Trajectory traj;
  std::optional<GlobalError> sup;
  std::optional<GlobalError> l2rel;
  double seconds = 0.0;
};

/// Writes <out>/steps.csv and <out>/manifest.json.
SolveResult run_solve(const SolveOptions& opts);

/// Every attempted step; rejected rows leave the state columns empty.
void write_steps_csv(std::ostream& os, const Problem& problem, const Trajectory& traj);

struct SweepOptions {
  std::string problem = "airy";
  std::vector<double> epsilons;  // empty: problem default
  double tol_min = 1e-9;
  double tol_max = 1e-3;
  int tol_count = 10;
  std::vector<SolverMode> methods{SolverMode::wkb_rkf45, SolverMode::rkwkb_mod,
                                  SolverMode::rkf45_only};
  std::optional<Domain> interval;
  std::optional<double> h0;
  PhaseMode phase = PhaseMode::exact();
  double rkf45_min_eps = 0.1;  // RKF45-only cells below this epsilon are skipped
  int jobs = 1;
  std::string out_dir = ".";
};

struct SweepRow {
  SolverMode method = SolverMode::wkb_rkf45;
  double epsilon = 0.0;
  double tol = 0.0;
  int steps = 0;
  int rejected = 0;
  int rkf45_steps = 0;
  int wkb_steps = 0;  // WKB or RKWKB steps
  double l2rel = 0.0;
  double sup = 0.0;
  double seconds = 0.0;
  std::string status = "ok";
};

std::vector<double> default_epsilons(const std::string& problem);
std::vector<double> log_spaced(double lo, double hi, int count);

/// Runs the (method, epsilon, tol) grid; rows sorted by (method, epsilon desc, tol desc).
/// Writes <out>/sweep.csv, <out>/timing.csv, <out>/manifest.json.
std::vector<SweepRow> run_sweep(const SweepOptions& opts);

struct StudyOptions {
  ProblemSpec problem;
  SolverConfig config;
  double x0 = 10.0;
  double h_max = 1.0;
  int h_count = 14;  // h_max, h_max/2, ...
  std::string out_dir = ".";
};

/// Writes <out>/estimator_run.csv, <out>/estimator_hsweep.csv, <out>/manifest.json.
void run_estimator_study(const StudyOptions& opts);

/// Re-executes the command recorded in a manifest into out_dir. With `check`,
/// compares the deterministic outputs byte-for-byte against the recorded ones.
/// Returns true when all compared files are identical (or check is off).
bool run_replay(const std::string& manifest_path, const std::string& out_dir, bool check,
                std::ostream& log);

/// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wkb::cli

#include "wkbsolve/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "wkbsolve/study.hpp"

namespace wkb::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

void write_json(const fs::path& path, const json& j) {
  auto os = open_out(path);
  os << j.dump(2) << "\n";
}

double default_h0(const ProblemSpec& spec) {
  if (spec.type == "airy") return 0.5;
  if (spec.type == "pcf") return 0.05;
  const Domain d = spec.resolved_domain();
  return (d.end - d.start) / 100.0;
}

std::string mode_list(const std::vector<SolverMode>& modes) {
  std::string s;
  for (auto m : modes) s += (s.empty() ? "" : ",") + to_string(m);
  return s;
}

std::vector<SolverMode> parse_modes(const std::string& text) {
  std::vector<SolverMode> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_mode(item));
  if (out.empty()) throw std::invalid_argument("empty method list");
  return out;
}

Domain parse_interval(const std::string& text) {
  const auto v = parse_list(text);
  if (v.size() != 2) throw std::invalid_argument("--interval expects a,b");
  return {v[0], v[1]};
}

json counters_json(const Trajectory& t) {
  return {{"accepted", t.accepted},
          {"rejected", t.rejected},
          {"rkf45", t.count(Method::rkf45)},
          {"wkb", t.count(Method::wkb)},
          {"rkwkb", t.count(Method::rkwkb)}};
}

bool same_bytes(const fs::path& a, const fs::path& b) {
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  if (!fa || !fb) return false;
  return std::equal(std::istreambuf_iterator<char>(fa), std::istreambuf_iterator<char>(),
                    std::istreambuf_iterator<char>(fb), std::istreambuf_iterator<char>());
}

}  // namespace

void write_steps_csv(std::ostream& os, const Problem& problem, const Trajectory& traj) {
  const bool ref = problem.has_exact();
  os << "step_index,x,h,method,accepted,est,theta,re_phi,im_phi,re_dphi,im_dphi";
  if (ref) os << ",ref_re,ref_im,rel_err";
  os << "\n";
  for (const auto& r : traj.attempts) {
    os << r.index << ',' << fmt17(r.x) << ',' << fmt17(r.h) << ',' << to_string(r.method) << ','
       << (r.accepted ? 1 : 0) << ',' << fmt17(r.est) << ',' << fmt17(r.theta);
    if (r.accepted) {
      os << ',' << fmt17(r.state.phi.real()) << ',' << fmt17(r.state.phi.imag()) << ','
         << fmt17(r.state.dphi.real()) << ',' << fmt17(r.state.dphi.imag());
      if (ref) {
        const cplx e = problem.exact(r.x).phi;
        const double rel = std::abs(e) > 0.0 ? std::abs(r.state.phi - e) / std::abs(e) : NAN;
        os << ',' << fmt17(e.real()) << ',' << fmt17(e.imag()) << ',' << fmt17(rel);
      }
    } else {
      os << ",,,,";
      if (ref) os << ",,,";
    }
    os << "\n";
  }
}

SolveResult run_solve(const SolveOptions& opts) {
  const Problem problem = opts.problem.build();
  const auto t0 = Clock::now();
  SolveResult res;
  res.traj = integrate(problem, opts.config);
  res.seconds = seconds_since(t0);
  if (problem.has_exact()) {
    res.sup = global_error(res.traj, problem, ErrorNorm::sup);
    res.l2rel = global_error(res.traj, problem, ErrorNorm::l2rel);
  }

  const fs::path dir(opts.out_dir);
  fs::create_directories(dir);
  {
    auto os = open_out(dir / "steps.csv");
    write_steps_csv(os, problem, res.traj);
  }
  json m;
  m["command"] = "solve";
  m["problem"] = to_json(opts.problem);
  m["config"] = to_json(opts.config);
  m["outputs"] = {{"steps", "steps.csv"}};
  m["deterministic_outputs"] = {"steps.csv"};
  m["wall_clock_seconds"] = res.seconds;
  m["counters"] = counters_json(res.traj);
  if (res.sup)
    m["error"] = {{"sup", res.sup->value},
                  {"l2rel", res.l2rel->value},
                  {"skipped_nodes", res.sup->skipped}};
  write_json(dir / "manifest.json", m);
  return res;
}

std::vector<double> default_epsilons(const std::string& problem) {
  if (problem == "pcf") return {std::ldexp(1.0, -4), std::ldexp(1.0, -6), std::ldexp(1.0, -8)};
  return {1.0, 1e-1, 1e-2, 1e-3, 1e-4};
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  if (count < 1 || !(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("bad log range");
  std::vector<double> out;
  if (count == 1) return {lo};
  const double a = std::log10(lo), b = std::log10(hi);
  for (int i = 0; i < count; ++i) out.push_back(std::pow(10.0, a + (b - a) * i / (count - 1)));
  return out;
}

std::vector<SweepRow> run_sweep(const SweepOptions& opts) {
  if (opts.problem != "airy" && opts.problem != "pcf")
    throw std::invalid_argument("sweep supports the airy and pcf benchmarks");
  const auto eps_list = opts.epsilons.empty() ? default_epsilons(opts.problem) : opts.epsilons;
  const auto tols = log_spaced(opts.tol_min, opts.tol_max, opts.tol_count);

  std::vector<SweepRow> rows;
  for (auto m : opts.methods)
    for (double e : eps_list) {
      if (m == SolverMode::rkf45_only && e < opts.rkf45_min_eps) continue;
      for (double t : tols) {
        SweepRow r;
        r.method = m;
        r.epsilon = e;
        r.tol = t;
        rows.push_back(r);
      }
    }

  auto run_cell = [&](SweepRow& r) {
    try {
      ProblemSpec spec;
      spec.type = opts.problem;
      spec.epsilon = r.epsilon;
      spec.domain = opts.interval;
      const Problem problem = spec.build();
      SolverConfig c;
      c.tol = r.tol;
      c.mode = r.method;
      c.phase = opts.phase;
      c.h_initial = opts.h0 ? *opts.h0 : default_h0(spec);
      const auto t0 = Clock::now();
      const Trajectory t = integrate(problem, c);
      r.seconds = seconds_since(t0);
      r.steps = t.accepted;
      r.rejected = t.rejected;
      r.rkf45_steps = t.count(Method::rkf45);
      r.wkb_steps = t.count(Method::wkb) + t.count(Method::rkwkb);
      r.l2rel = global_error(t, problem, ErrorNorm::l2rel).value;
      r.sup = global_error(t, problem, ErrorNorm::sup).value;
    } catch (const std::exception& ex) {
      r.status = std::string("error: ") + ex.what();
    }
  };

  const int jobs = std::max(1, opts.jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) run_cell(rows[i]);
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
  }

  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.method != b.method) return a.method < b.method;
    if (a.epsilon != b.epsilon) return a.epsilon > b.epsilon;
    return a.tol > b.tol;
  });

  const fs::path dir(opts.out_dir);
  fs::create_directories(dir);
  {
    auto os = open_out(dir / "sweep.csv");
    os << "method,epsilon,tol,steps,rejected,rkf45_steps,wkb_steps,l2rel,sup,status\n";
    for (const auto& r : rows)
      os << to_string(r.method) << ',' << fmt17(r.epsilon) << ',' << fmt17(r.tol) << ','
         << r.steps << ',' << r.rejected << ',' << r.rkf45_steps << ',' << r.wkb_steps << ','
         << fmt17(r.l2rel) << ',' << fmt17(r.sup) << ",\"" << r.status << "\"\n";
  }
  {
    auto os = open_out(dir / "timing.csv");
    os << "method,epsilon,tol,seconds\n";
    for (const auto& r : rows)
      os << to_string(r.method) << ',' << fmt17(r.epsilon) << ',' << fmt17(r.tol) << ','
         << fmt17(r.seconds) << "\n";
  }
  json m;
  m["command"] = "sweep";
  m["options"] = {{"problem", opts.problem},
                  {"epsilons", eps_list},
                  {"tol_min", opts.tol_min},
                  {"tol_max", opts.tol_max},
                  {"tol_count", opts.tol_count},
                  {"methods", mode_list(opts.methods)},
                  {"phase", opts.phase.str()},
                  {"rkf45_min_eps", opts.rkf45_min_eps},
                  {"jobs", jobs}};
  if (opts.interval) m["options"]["interval"] = {opts.interval->start, opts.interval->end};
  if (opts.h0) m["options"]["h0"] = *opts.h0;
  m["outputs"] = {{"sweep", "sweep.csv"}, {"timing", "timing.csv"}};
  m["deterministic_outputs"] = {"sweep.csv"};
  double total = 0.0;
  int failed = 0;
  for (const auto& r : rows) {
    total += r.seconds;
    failed += r.status != "ok";
  }
  m["wall_clock_seconds"] = total;
  m["counters"] = {{"cells", rows.size()}, {"failed", failed}};
  write_json(dir / "manifest.json", m);
  return rows;
}

void run_estimator_study(const StudyOptions& opts) {
  const Problem problem = opts.problem.build();
  if (!problem.has_exact()) throw std::invalid_argument("estimator study needs an exact solution");
  if (opts.h_count < 1 || !(opts.h_max > 0.0)) throw std::invalid_argument("bad h-sweep range");
  const auto t0 = Clock::now();
  const auto run = estimator_run(problem, opts.config);
  std::vector<double> hs;
  for (int i = 0; i < opts.h_count; ++i) hs.push_back(std::ldexp(opts.h_max, -i));
  const auto sw_wkb = estimator_hsweep(problem, opts.config.phase, Method::wkb, opts.x0, hs);
  const auto sw_rk = estimator_hsweep(problem, opts.config.phase, Method::rkwkb, opts.x0, hs);

  const fs::path dir(opts.out_dir);
  fs::create_directories(dir);
  {
    auto os = open_out(dir / "estimator_run.csv");
    os << "step_index,method,x0,h,est,lte,deviation\n";
    for (const auto& s : run)
      os << s.index << ',' << to_string(s.method) << ',' << fmt17(s.x0) << ',' << fmt17(s.h)
         << ',' << fmt17(s.est) << ',' << fmt17(s.lte) << ',' << fmt17(s.deviation) << "\n";
  }
  {
    auto os = open_out(dir / "estimator_hsweep.csv");
    os << "method,x0,h,est,lte,deviation\n";
    for (const auto* sw : {&sw_wkb, &sw_rk})
      for (const auto& s : *sw)
        os << to_string(s.method) << ',' << fmt17(s.x0) << ',' << fmt17(s.h) << ','
           << fmt17(s.est) << ',' << fmt17(s.lte) << ',' << fmt17(s.deviation) << "\n";
  }
  double worst = 0.0;
  for (const auto& s : run) worst = std::max(worst, s.deviation);
  json m;
  m["command"] = "estimator-study";
  m["problem"] = to_json(opts.problem);
  m["config"] = to_json(opts.config);
  m["options"] = {{"x0", opts.x0}, {"h_max", opts.h_max}, {"h_count", opts.h_count}};
  m["outputs"] = {{"run", "estimator_run.csv"}, {"hsweep", "estimator_hsweep.csv"}};
  m["deterministic_outputs"] = {"estimator_run.csv", "estimator_hsweep.csv"};
  m["wall_clock_seconds"] = seconds_since(t0);
  m["counters"] = {{"samples", run.size()}};
  m["error"] = {{"max_run_deviation", worst}};
  write_json(dir / "manifest.json", m);
}

bool run_replay(const std::string& manifest_path, const std::string& out_dir, bool check,
                std::ostream& log) {
  std::ifstream is(manifest_path);
  if (!is) throw std::invalid_argument("cannot read manifest " + manifest_path);
  json m;
  try {
    m = json::parse(is);
  } catch (const json::exception& ex) {
    throw std::invalid_argument(std::string("bad manifest: ") + ex.what());
  }
  const fs::path src = fs::path(manifest_path).parent_path();
  if (fs::weakly_canonical(src.empty() ? fs::path(".") : src) == fs::weakly_canonical(out_dir))
    throw std::invalid_argument("replay output directory must differ from the manifest's");

  const std::string cmd = m.at("command").get<std::string>();
  try {
    if (cmd == "solve") {
      SolveOptions o;
      o.problem = problem_spec_from_json(m.at("problem"));
      o.config = solver_config_from_json(m.at("config"));
      o.out_dir = out_dir;
      run_solve(o);
    } else if (cmd == "sweep") {
      const json& j = m.at("options");
      SweepOptions o;
      o.problem = j.at("problem").get<std::string>();
      o.epsilons = j.at("epsilons").get<std::vector<double>>();
      o.tol_min = j.at("tol_min").get<double>();
      o.tol_max = j.at("tol_max").get<double>();
      o.tol_count = j.at("tol_count").get<int>();
      o.methods = parse_modes(j.at("methods").get<std::string>());
      o.phase = PhaseMode::parse(j.at("phase").get<std::string>());
      o.rkf45_min_eps = j.at("rkf45_min_eps").get<double>();
      o.jobs = j.value("jobs", 1);
      if (j.contains("interval")) {
        const auto v = j.at("interval").get<std::vector<double>>();
        o.interval = Domain{v.at(0), v.at(1)};
      }
      if (j.contains("h0")) o.h0 = j.at("h0").get<double>();
      o.out_dir = out_dir;
      run_sweep(o);
    } else if (cmd == "estimator-study") {
      StudyOptions o;
      o.problem = problem_spec_from_json(m.at("problem"));
      o.config = solver_config_from_json(m.at("config"));
      o.x0 = m.at("options").at("x0").get<double>();
      o.h_max = m.at("options").at("h_max").get<double>();
      o.h_count = m.at("options").at("h_count").get<int>();
      o.out_dir = out_dir;
      run_estimator_study(o);
    } else {
      throw std::invalid_argument("manifest has unknown command '" + cmd + "'");
    }
  } catch (const json::exception& ex) {
    throw std::invalid_argument(std::string("bad manifest: ") + ex.what());
  }

  if (!check) return true;
  bool ok = true;
  for (const auto& f : m.at("deterministic_outputs")) {
    const std::string name = f.get<std::string>();
    const bool same = same_bytes(src / name, fs::path(out_dir) / name);
    log << name << ": " << (same ? "identical" : "DIFFERENT") << "\n";
    ok = ok && same;
  }
  return ok;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adaptive WKB marching solver for eps^2 phi'' + a(x) phi = 0"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "integrate one problem and write steps.csv");
  std::string problem_arg, problem_file, interval_arg, method = "wkb+rkf45", phase = "exact";
  std::string out_dir = ".";
  double eps = 1.0, tol = 1e-6, eta = 1e-2;
  std::optional<double> h0;
  int max_rej = 25;
  auto* o_problem = solve->add_option("--problem", problem_arg, "airy | pcf | poly:c0,c1,...");
  auto* o_file = solve->add_option("--problem-file", problem_file, "problem as JSON")
                     ->check(CLI::ExistingFile);
  o_problem->excludes(o_file);
  auto* o_eps = solve->add_option("--eps", eps, "semiclassical parameter");
  auto* o_int = solve->add_option("--interval", interval_arg, "a,b");
  o_file->excludes(o_eps)->excludes(o_int);
  solve->add_option("--tol", tol, "master tolerance");
  solve->add_option("--eta", eta, "absolute tolerance scale");
  solve->add_option("--h0", h0, "initial trial step");
  solve->add_option("--method", method, "wkb+rkf45 | rkwkbmod | rkwkb | rkf45");
  solve->add_option("--phase", phase, "exact | cc:N");
  solve->add_option("--max-rejections", max_rej, "consecutive rejection limit");
  solve->add_option("--out", out_dir, "output directory");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "method x eps x Tol grid, writes sweep.csv");
  std::string sw_problem = "airy", sw_eps, sw_methods = "wkb+rkf45,rkwkbmod,rkf45", sw_int;
  std::string sw_phase = "exact", sw_out = ".";
  double tol_min = 1e-9, tol_max = 1e-3, rk_min = 0.1;
  int tol_count = 10, jobs = 1;
  std::optional<double> sw_h0;
  sweep->add_option("--problem", sw_problem, "airy | pcf");
  sweep->add_option("--eps", sw_eps, "comma separated epsilon list");
  sweep->add_option("--tol-min", tol_min);
  sweep->add_option("--tol-max", tol_max);
  sweep->add_option("--tol-count", tol_count);
  sweep->add_option("--methods", sw_methods);
  sweep->add_option("--interval", sw_int, "a,b");
  sweep->add_option("--h0", sw_h0);
  sweep->add_option("--phase", sw_phase);
  sweep->add_option("--rkf45-min-eps", rk_min, "skip RKF45-only cells below this epsilon");
  sweep->add_option("--jobs", jobs, "worker threads");
  sweep->add_option("--out", sw_out);

  // estimator-study
  auto* study = app.add_subcommand("estimator-study", "error estimator vs local truncation error");
  std::string st_problem = "airy", st_method = "wkb+rkf45", st_int, st_phase = "exact";
  std::string st_out = ".";
  double st_eps = 1.0, st_tol = 1e-5, x0 = 10.0, h_max = 1.0;
  int h_count = 14;
  std::optional<double> st_h0;
  study->add_option("--problem", st_problem, "airy | pcf");
  study->add_option("--eps", st_eps);
  study->add_option("--tol", st_tol);
  study->add_option("--interval", st_int, "a,b");
  study->add_option("--h0", st_h0);
  study->add_option("--method", st_method, "wkb+rkf45 | rkwkbmod");
  study->add_option("--phase", st_phase);
  study->add_option("--x0", x0, "start of the single-step sweep");
  study->add_option("--h-max", h_max);
  study->add_option("--h-count", h_count);
  study->add_option("--out", st_out);

  // replay
  auto* replay = app.add_subcommand("replay", "re-run a manifest");
  std::string manifest, rp_out;
  bool check = false;
  replay->add_option("--manifest", manifest)->required()->check(CLI::ExistingFile);
  replay->add_option("--out", rp_out, "output directory")->required();
  replay->add_flag("--check", check, "compare outputs byte-for-byte");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kFlagError;
  }

  try {
    if (*solve) {
      SolveOptions o;
      if (!problem_file.empty()) {
        std::ifstream is(problem_file);
        o.problem = problem_spec_from_json(json::parse(is));
      } else if (!problem_arg.empty()) {
        o.problem = parse_problem_arg(problem_arg);
        o.problem.epsilon = eps;
        if (!interval_arg.empty()) o.problem.domain = parse_interval(interval_arg);
      } else {
        throw std::invalid_argument("one of --problem or --problem-file is required");
      }
      o.config.tol = tol;
      o.config.eta = eta;
      o.config.mode = parse_mode(method);
      o.config.phase = PhaseMode::parse(phase);
      o.config.max_rejections = max_rej;
      o.config.h_initial = h0 ? *h0 : default_h0(o.problem);
      o.config.validate();
      o.out_dir = out_dir;
      const auto res = run_solve(o);
      out << "accepted " << res.traj.accepted << " rejected " << res.traj.rejected;
      if (res.sup) out << " sup_rel_err " << fmt17(res.sup->value);
      out << "\n";
    } else if (*sweep) {
      SweepOptions o;
      o.problem = sw_problem;
      if (!sw_eps.empty()) o.epsilons = parse_list(sw_eps);
      o.tol_min = tol_min;
      o.tol_max = tol_max;
      o.tol_count = tol_count;
      o.methods = parse_modes(sw_methods);
      if (!sw_int.empty()) o.interval = parse_interval(sw_int);
      o.h0 = sw_h0;
      o.phase = PhaseMode::parse(sw_phase);
      o.rkf45_min_eps = rk_min;
      o.jobs = jobs;
      o.out_dir = sw_out;
      const auto rows = run_sweep(o);
      int failed = 0;
      for (const auto& r : rows) failed += r.status != "ok";
      out << rows.size() << " cells, " << failed << " failed\n";
      if (failed > 0) return kSolverFailure;
    } else if (*study) {
      StudyOptions o;
      o.problem.type = st_problem;
      o.problem.epsilon = st_eps;
      if (!st_int.empty()) o.problem.domain = parse_interval(st_int);
      o.config.tol = st_tol;
      o.config.mode = parse_mode(st_method);
      if (o.config.mode != SolverMode::wkb_rkf45 && o.config.mode != SolverMode::rkwkb_mod)
        throw std::invalid_argument("estimator-study supports wkb+rkf45 and rkwkbmod");
      o.config.phase = PhaseMode::parse(st_phase);
      o.config.h_initial = st_h0 ? *st_h0 : default_h0(o.problem);
      o.x0 = x0;
      o.h_max = h_max;
      o.h_count = h_count;
      o.out_dir = st_out;
      run_estimator_study(o);
    } else if (*replay) {
      if (!run_replay(manifest, rp_out, check, out)) return kSolverFailure;
    }
  } catch (const std::invalid_argument& ex) {
    err << "error: " << ex.what() << "\n";
    return kFlagError;
  } catch (const json::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kFlagError;
  } catch (const std::exception& ex) {
    err << "solver failure: " << ex.what() << "\n";
    return kSolverFailure;
  }
  return kOk;
}

}  // namespace wkb::cli

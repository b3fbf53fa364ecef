#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "wkbsolve/cli.hpp"
#include "wkbsolve/io.hpp"

using namespace wkb;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("wkbsolve_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

int run_cli(std::vector<std::string> args, std::string* out_text = nullptr) {
  args.insert(args.begin(), "wkbsolve");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  return code;
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) v.push_back(l);
  return v;
}

}  // namespace

TEST_CASE("solve writes steps.csv and a manifest") {
  TempDir dir;
  std::string out;
  REQUIRE(run_cli({"solve", "--problem", "airy", "--eps", "0.01", "--tol", "1e-6", "--out", dir.path.string()}, &out) ==
          cli::kOk);
  CHECK(out.rfind("accepted ", 0) == 0);
  const auto rows = lines(slurp(dir / "steps.csv"));
  REQUIRE(rows.size() > 2);
  CHECK(rows[0] ==
        "step_index,x,h,method,accepted,est,theta,re_phi,im_phi,re_dphi,im_dphi,ref_re,ref_im,rel_err");
  int accepted = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) accepted += rows[i].find(",1,") != std::string::npos;
  CHECK(accepted > 10);

  const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(m.contains("deterministic_outputs"));
}

TEST_CASE("poly problems have no reference columns") {
  TempDir dir;
  REQUIRE(run_cli({"solve", "--problem", "poly:1,0.5", "--eps", "0.1", "--interval", "0,2", "--out",
                   dir.path.string()}) == cli::kOk);
  const auto rows = lines(slurp(dir / "steps.csv"));
  CHECK(rows[0] == "step_index,x,h,method,accepted,est,theta,re_phi,im_phi,re_dphi,im_dphi");
}

TEST_CASE("flag errors exit with 2") {
  TempDir dir;
  const std::string d = dir.path.string();
  CHECK(run_cli({"solve", "--problem", "airy", "--tol", "abc", "--out", d}) == cli::kFlagError);
  CHECK(run_cli({"solve", "--problem", "airy", "--tol", "-1", "--out", d}) == cli::kFlagError);
  CHECK(run_cli({"solve", "--problem", "airy", "--method", "euler", "--out", d}) == cli::kFlagError);
  CHECK(run_cli({"solve", "--problem", "airy", "--phase", "cc:x", "--out", d}) == cli::kFlagError);
  CHECK(run_cli({"solve", "--out", d}) == cli::kFlagError);
  CHECK(run_cli({"solve", "--problem", "poly:1,0,1", "--interval", "0,1", "--out", d}) == cli::kFlagError);
  CHECK(run_cli({"frobnicate"}) == cli::kFlagError);
  CHECK(run_cli({"--help"}) == cli::kOk);
}

TEST_CASE("quadratic poly runs with quadrature phase") {
  TempDir dir;
  CHECK(run_cli({"solve", "--problem", "poly:1,0,1", "--interval", "0,1", "--phase", "cc:15", "--eps", "0.05",
                 "--out", dir.path.string()}) == cli::kOk);
}

TEST_CASE("solver failures exit with 3") {
  TempDir dir;
  CHECK(run_cli({"solve", "--problem", "airy", "--eps", "0.01", "--method", "rkf45", "--h0", "40",
                 "--max-rejections", "1", "--out", dir.path.string()}) == cli::kSolverFailure);
}

TEST_CASE("replay reproduces solve and sweep outputs") {
  TempDir a, b, c, d;
  REQUIRE(run_cli({"solve", "--problem", "pcf", "--eps", "0.0625", "--tol", "1e-7", "--out", a.path.string()}) ==
          cli::kOk);
  std::string log;
  CHECK(run_cli({"replay", "--manifest", a / "manifest.json", "--out", b.path.string(), "--check"}, &log) ==
        cli::kOk);
  CHECK(slurp(a / "steps.csv") == slurp(b / "steps.csv"));

  REQUIRE(run_cli({"sweep", "--problem", "airy", "--eps", "0.1,0.01", "--tol-count", "2", "--jobs", "2", "--out",
                   c.path.string()}) == cli::kOk);
  const auto rows = lines(slurp(c / "sweep.csv"));
  CHECK(rows.size() == 1 + 2 * 2 * 2 + 2);  // rkf45 only for eps >= 0.1
  CHECK(run_cli({"replay", "--manifest", c / "manifest.json", "--out", d.path.string(), "--check"}) == cli::kOk);

  // replay into the source directory is refused
  CHECK(run_cli({"replay", "--manifest", a / "manifest.json", "--out", a.path.string()}) == cli::kFlagError);
}

TEST_CASE("replay detects a modified output") {
  TempDir a, b;
  REQUIRE(run_cli({"solve", "--problem", "airy", "--eps", "0.1", "--out", a.path.string()}) == cli::kOk);
  {
    std::ofstream os(a / "steps.csv", std::ios::app);
    os << "tampered\n";
  }
  CHECK(run_cli({"replay", "--manifest", a / "manifest.json", "--out", b.path.string(), "--check"}) ==
        cli::kSolverFailure);
}

TEST_CASE("estimator study outputs") {
  TempDir dir;
  REQUIRE(run_cli({"estimator-study", "--problem", "airy", "--eps", "0.01", "--h-count", "4", "--out",
                   dir.path.string()}) == cli::kOk);
  CHECK(lines(slurp(dir / "estimator_hsweep.csv")).size() > 4);
  CHECK(lines(slurp(dir / "estimator_run.csv")).size() > 1);
}

TEST_CASE("problem and config json round trip") {
  ProblemSpec s = parse_problem_arg("poly:2,0.5,-0.1");
  s.epsilon = 0.03;
  s.domain = Domain{0.0, 3.0};
  const ProblemSpec back = problem_spec_from_json(to_json(s));
  CHECK(back.type == "poly");
  CHECK(back.coeffs == s.coeffs);
  CHECK(back.epsilon == 0.03);
  CHECK(back.resolved_domain().end == 3.0);
  const Problem p = problem_from_json(to_json(s));
  CHECK(p.field.eval(1.0) == doctest::Approx(2.4));
  CHECK(p.initial.x == 0.0);

  SolverConfig c;
  c.tol = 3e-8;
  c.mode = SolverMode::rkwkb_original;
  c.phase = PhaseMode::quadrature(21);
  c.h_initial = 0.125;
  const SolverConfig cb = solver_config_from_json(to_json(c));
  CHECK(cb.tol == 3e-8);
  CHECK(cb.mode == SolverMode::rkwkb_original);
  CHECK(cb.phase.str() == "cc:21");
  CHECK(cb.h_initial == 0.125);

  CHECK(problem_spec_from_json(to_json(parse_problem_arg("pcf"))).resolved_domain().start == 0.01);
  CHECK_THROWS(parse_problem_arg("bessel"));
  CHECK_THROWS(problem_from_json(nlohmann::json{{"type", "poly"}, {"epsilon", 0.1}, {"coeffs", {1.0}}}));
}

TEST_CASE("formatting helpers") {
  CHECK(fmt17(0.1) == "0.10000000000000001");
  CHECK(parse_list("1,0.5, 2") == std::vector<double>{1.0, 0.5, 2.0});
  CHECK_THROWS_AS(parse_list("1,,2"), std::invalid_argument);
  const auto ls = cli::log_spaced(1e-9, 1e-3, 7);
  REQUIRE(ls.size() == 7);
  CHECK(ls.front() == doctest::Approx(1e-9));
  CHECK(ls[3] == doctest::Approx(1e-6));
}

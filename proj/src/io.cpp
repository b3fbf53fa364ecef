#include "wkbsolve/io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace wkb {

using nlohmann::json;

namespace {

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("complex value must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

Domain ProblemSpec::resolved_domain() const {
  if (domain) return *domain;
  if (type == "airy") return {0.1, 50.0};
  if (type == "pcf") return {0.01, 1.99};
  throw std::invalid_argument("poly problems need an explicit domain");
}

Problem ProblemSpec::build() const {
  const Domain d = resolved_domain();
  if (type == "airy") return make_airy_problem(epsilon, d);
  if (type == "pcf") return make_pcf_problem(epsilon, d);
  if (type != "poly") throw std::invalid_argument("unknown problem type '" + type + "'");
  if (coeffs.empty()) throw std::invalid_argument("poly problem needs coefficients");
  WaveState init;
  if (initial) {
    init = *initial;
  } else {
    // right-moving wave at the left end when a > 0 there
    const double a0 = CoefficientField(coeffs).eval(d.start);
    init.phi = 1.0;
    init.dphi = a0 > 0.0 ? cplx(0.0, std::sqrt(a0) / epsilon) : cplx(0.0, 0.0);
  }
  init.x = d.start;
  return make_polynomial_problem(coeffs, epsilon, d, init);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    double v;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("not a number: '" + item + "'");
    }
    if (pos != item.size()) throw std::invalid_argument("not a number: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

ProblemSpec parse_problem_arg(const std::string& text) {
  ProblemSpec spec;
  if (text == "airy" || text == "pcf") {
    spec.type = text;
  } else if (text.rfind("poly:", 0) == 0) {
    spec.type = "poly";
    spec.coeffs = parse_list(text.substr(5));
  } else {
    throw std::invalid_argument("--problem must be airy, pcf or poly:<coeffs>");
  }
  return spec;
}

json to_json(const ProblemSpec& spec) {
  json j;
  j["type"] = spec.type;
  j["epsilon"] = spec.epsilon;
  if (!spec.coeffs.empty()) j["coeffs"] = spec.coeffs;
  if (spec.domain) j["domain"] = json::array({spec.domain->start, spec.domain->end});
  if (spec.initial)
    j["initial"] = {{"phi", complex_json(spec.initial->phi)},
                    {"dphi", complex_json(spec.initial->dphi)}};
  return j;
}

ProblemSpec problem_spec_from_json(const json& j) {
  ProblemSpec spec;
  spec.type = j.at("type").get<std::string>();
  spec.epsilon = j.at("epsilon").get<double>();
  if (j.contains("coeffs")) spec.coeffs = j.at("coeffs").get<std::vector<double>>();
  if (j.contains("domain")) {
    const auto d = j.at("domain").get<std::vector<double>>();
    if (d.size() != 2) throw std::invalid_argument("domain must be [start, end]");
    spec.domain = Domain{d[0], d[1]};
  }
  if (j.contains("initial")) {
    WaveState w;
    w.phi = complex_from(j.at("initial").at("phi"));
    w.dphi = complex_from(j.at("initial").at("dphi"));
    spec.initial = w;
  }
  return spec;
}

Problem problem_from_json(const json& j) { return problem_spec_from_json(j).build(); }

json to_json(const SolverConfig& c) {
  return {{"tol", c.tol},
          {"eta", c.eta},
          {"theta_min", c.theta_min},
          {"theta_max", c.theta_max},
          {"safety", c.safety},
          {"h0", c.h_initial},
          {"method", to_string(c.mode)},
          {"phase", c.phase.str()},
          {"max_rejections", c.max_rejections},
          {"clamp_end", c.clamp_end}};
}

SolverConfig solver_config_from_json(const json& j) {
  SolverConfig c;
  c.tol = j.at("tol").get<double>();
  c.eta = j.value("eta", c.eta);
  c.theta_min = j.value("theta_min", c.theta_min);
  c.theta_max = j.value("theta_max", c.theta_max);
  c.safety = j.value("safety", c.safety);
  c.h_initial = j.at("h0").get<double>();
  c.mode = parse_mode(j.at("method").get<std::string>());
  c.phase = PhaseMode::parse(j.value("phase", std::string("exact")));
  c.max_rejections = j.value("max_rejections", c.max_rejections);
  c.clamp_end = j.value("clamp_end", c.clamp_end);
  return c;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace wkb

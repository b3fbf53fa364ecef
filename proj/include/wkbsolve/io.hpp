#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wkbsolve/control.hpp"
#include "wkbsolve/problem.hpp"

namespace wkb {

// Serializable description of a problem: the two benchmarks or a polynomial.
struct ProblemSpec {
  std::string type = "airy";  // airy | pcf | poly
  double epsilon = 1.0;
  std::vector<double> coeffs;  // poly only, ascending powers
  std::optional<Domain> domain;
  std::optional<WaveState> initial;  // poly only; x is taken from the domain

  Problem build() const;
  Domain resolved_domain() const;
};

/// "airy", "pcf" or "poly:c0,c1,..." (ascending coefficients).
ProblemSpec parse_problem_arg(const std::string& text);

nlohmann::json to_json(const ProblemSpec& spec);
ProblemSpec problem_spec_from_json(const nlohmann::json& j);

/// Shorthand for problem_spec_from_json(j).build().
Problem problem_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SolverConfig& config);
SolverConfig solver_config_from_json(const nlohmann::json& j);

/// 17 significant digits.
std::string fmt17(double v);

/// "a,b" -> list of doubles; throws std::invalid_argument.
std::vector<double> parse_list(const std::string& text);

}  // namespace wkb

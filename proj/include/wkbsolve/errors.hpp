#pragma once

#include <stdexcept>
#include <string>

namespace wkb {

// A WKB step is not admissible at the requested point or interval (a(x)
// below tau_guard, or a vanishing phase derivative). The controller turns
// this into a rejected candidate.
class WkbInadmissible : public std::runtime_error {
 public:
  explicit WkbInadmissible(const std::string& what) : std::runtime_error(what) {}
};

// Unrecoverable failure of the integration driver.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wkb

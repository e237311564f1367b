#pragma once

#include <stdexcept>
#include <string>

namespace irsdetect {

// A design for which the chi-squared detector analysis does not exist
// (no reflection noise or no amplification): use the matched-filter path.
class DegenerateDesign : public std::domain_error {
public:
  explicit DegenerateDesign(const std::string& what) : std::domain_error(what) {}
};

// Empty feasible region for an optimization or benchmark configuration.
class InfeasibleProblem : public std::runtime_error {
public:
  explicit InfeasibleProblem(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace irsdetect

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trophy/precision.hpp"

namespace trophy {

/// An unconstrained test objective with its standard starting point.
struct ProblemSpec {
  std::string name;
  int dim = 0;
  std::vector<double> initial_point;
  std::optional<double> known_min_value;
  std::optional<std::vector<double>> known_minimizer;
  ScalarProgram program;
};

/// Value and gradient at `bits`; throws UsageError on a dimension mismatch.
Evaluation evaluate(const ProblemSpec& problem, std::span<const double> x, int bits);

/// Suite members with dim <= max_dim, sorted by name.
std::vector<ProblemSpec> list_problems(int max_dim);

/// Looks up a suite member by name; throws UsageError if unknown.
ProblemSpec find_problem(const std::string& name);

}  // namespace trophy

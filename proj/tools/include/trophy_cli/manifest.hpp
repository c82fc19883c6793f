#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "trophy/benchmark.hpp"

namespace trophy::cli {

/// A malformed or invalid manifest. what() reads "<source>:<line>: <field>: <reason>".
class ManifestError : public std::runtime_error {
 public:
  ManifestError(const std::string& source, int line, const std::string& field, const std::string& reason);
  [[nodiscard]] int line() const noexcept { return line_; }
  [[nodiscard]] const std::string& field() const noexcept { return field_; }

 private:
  int line_;
  std::string field_;
};

/// Benchmark grid description.
///
///   # comment
///   [suite]
///   problems = booth, rosenbrock2      (or: max_dim = 10)
///
///   [output]
///   dir = results
///   jobs = 4
///   cost_model = linear
///
///   [solver trophy-sd]
///   preset = trophy-sd                 (optional starting point)
///   algorithm = trophy                 (trophy | trust_region)
///   bits = 24, 53
///   eps_tol = 1e-5
///
/// Solver keys besides preset, algorithm and bits: eta1, eta2, gamma_inc,
/// gamma_dec, omega, delta0, eps_tol, max_iter, memory, reset_pairs_on_switch,
/// forcing (geometric | harmonic), forcing_scale, forcing_ratio.
struct RunManifest {
  std::vector<std::string> problems;
  std::optional<int> max_dim;
  std::string out_dir = "trophy-out";
  int jobs = 1;
  std::string cost_model = "linear";
  std::vector<SolverDefinition> solvers;

  /// Problems selected by the suite section, sorted by name.
  [[nodiscard]] std::vector<ProblemSpec> resolve_suite() const;
};

/// Parses and validates. `source` names the input in diagnostics.
RunManifest parse_manifest(const std::string& text, const std::string& source = "<manifest>");
RunManifest load_manifest(const std::string& path);

/// Canonical text form: every solver constant is written explicitly.
std::string serialize_manifest(const RunManifest& manifest);

bool equivalent(const RunManifest& a, const RunManifest& b);

}  // namespace trophy::cli

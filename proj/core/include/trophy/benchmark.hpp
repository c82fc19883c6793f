#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "trophy/oracle.hpp"
#include "trophy/problems.hpp"
#include "trophy/solver.hpp"

namespace trophy {

enum class SolverAlgorithm { trust_region, trophy };

/// A named solver for grid runs. config.x0 is ignored; each problem supplies
/// its own initial point.
struct SolverDefinition {
  std::string name;
  SolverAlgorithm algorithm = SolverAlgorithm::trophy;
  SolverConfig config;
};

/// tr-double, tr-single, tr-half, trophy-sd, trophy-hsd, trophy-ladder and
/// trophy-every5 with default constants. Throws UsageError for other names.
SolverDefinition solver_preset(const std::string& name);
std::vector<std::string> solver_preset_names();

/// Cost models reported for every run, in CSV column order.
inline constexpr std::string_view kCostModelNames[] = {"linear", "quadratic", "paper-linear", "paper-quadratic"};

struct RunRecord {
  std::string problem;
  std::string solver;
  SolveStatus status = SolveStatus::eval_failure;
  long iterations = 0;
  double f_final = 0.0;
  double gnorm_final = 0.0;
  EvalLedger ledger;
  /// One entry per kCostModelNames; NaN where a table has no weight for a level.
  std::vector<double> adjusted_calls;

  [[nodiscard]] bool solved() const noexcept { return status == SolveStatus::first_order; }
};

enum class Metric { adjusted_calls, iterations, gnorm_final };

std::string_view to_string(Metric m) noexcept;

struct MetricSpec {
  Metric metric = Metric::adjusted_calls;
  /// Index into kCostModelNames for adjusted_calls.
  std::size_t cost_model = 0;
};

/// adjusted_calls_<model>, iterations or gnorm_final.
std::string metric_label(const MetricSpec& spec);

/// v_ij for ratio purposes: +inf for unsolved runs, and zero clamped to the
/// smallest normal double so ratios stay defined.
double metric_value(const RunRecord& record, const MetricSpec& spec);

struct RatioTable {
  std::vector<std::string> problems;
  std::vector<std::string> solvers;
  /// ratios[i][j] for problem i and solver j.
  std::vector<std::vector<double>> ratios;
};

/// r_ij = v_ij / min_j v_ij, +inf for failures; rows where every solver failed
/// stay all +inf. Solver order follows first appearance in `records`.
RatioTable performance_ratios(const std::vector<RunRecord>& records, const MetricSpec& spec);

struct ProfileCurve {
  std::string solver;
  std::vector<double> tau;
  std::vector<double> h;
};

/// h_j(tau) = #{i : r_ij <= tau} / N. Throws UsageError for an empty table or
/// a grid that does not start at 1 and increase.
std::vector<ProfileCurve> performance_profile(const RatioTable& table, const std::vector<double>& tau_grid);

/// 200 log-spaced points from 1 to 2^10.
std::vector<double> default_tau_grid();

/// Runs every (problem, solver) cell on up to `parallelism` threads. Cell
/// failures become eval_failure records. Bit-ratio cost models use
/// `reference_bits` as the denominator (0 means each run's own top level).
/// Output is sorted by (problem, solver).
std::vector<RunRecord> run_grid(const std::vector<ProblemSpec>& problems,
                                const std::vector<SolverDefinition>& solvers, int parallelism,
                                int reference_bits = 0);

/// One cell of the grid. `full_result` and `observer` are optional.
RunRecord run_one(const ProblemSpec& problem, const SolverDefinition& solver, int reference_bits = 0,
                  SolveResult* full_result = nullptr, const IterationObserver& observer = {});

}  // namespace trophy

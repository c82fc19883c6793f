#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "trophy/lsr1.hpp"
#include "trophy/oracle.hpp"
#include "trophy/steihaug.hpp"

namespace trophy {

/// Non-negative sequence r_k -> 0 that tightens the precision test.
struct ForcingSequence {
  enum class Kind { geometric, harmonic };

  Kind kind = Kind::geometric;
  double scale = 10.0;
  double ratio = 0.9;

  /// r_k = scale * ratio^k.
  static ForcingSequence geometric(double scale, double ratio);
  /// r_k = scale / (k + 1).
  static ForcingSequence harmonic(double scale);

  [[nodiscard]] double operator()(long k) const;
};

struct SolverConfig {
  double eta1 = 0.1;
  double eta2 = 0.75;
  double gamma_inc = 2.0;
  double gamma_dec = 0.5;
  double omega = 0.9;
  ForcingSequence forcing;
  double delta0 = 1.0;
  double eps_tol = 1e-5;
  int max_iter = 5000;
  int lsr1_memory = 10;
  /// Drop curvature pairs whenever the precision level increases.
  bool reset_pairs_on_switch = false;
  PrecisionHierarchy hierarchy{std::vector<int>{kNativeBits}};
  Eigen::VectorXd x0;

  /// eta = min(eta1, 1 - eta2).
  [[nodiscard]] double eta() const noexcept { return eta1 < 1.0 - eta2 ? eta1 : 1.0 - eta2; }

  /// Throws ConfigError on any out-of-domain parameter.
  void validate() const;
};

enum class SolveStatus { first_order, radius_underflow, max_iter, eval_failure };

std::string_view to_string(SolveStatus s) noexcept;

struct IterationRecord {
  long k = 0;
  int level = 0;
  int bits = 0;
  double delta = 0.0;
  double rho_tilde = 0.0;
  double pred = 0.0;
  double ered = 0.0;
  bool successful = false;
  double f_est = 0.0;
  double gnorm_est = 0.0;
  bool escalated = false;
};

/// Evaluation counts split by purpose, kept alongside the ledger so the two
/// can be reconciled.
struct SolveCounters {
  long theta_computations = 0;
  /// Level-P f and g pairs spent confirming a low-precision stopping test or
  /// reporting the final point.
  long top_level_checks = 0;
  /// f^P evaluations made to build or test the model while p_k = P.
  long top_level_model_f_evals = 0;
  long escalations = 0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::max_iter;
  Eigen::VectorXd x_final;
  double f_final = 0.0;
  double gnorm_final = 0.0;
  long iterations = 0;
  int final_level = 0;
  EvalLedger ledger;
  std::vector<IterationRecord> history;
  SolveCounters counters;
};

/// Iterate state of Algorithm-style TR methods.
struct SolverState {
  Eigen::VectorXd x;
  double delta = 1.0;
  double theta = 0.0;
  int level = 0;
  bool failed_once = false;
  long k = 0;
  double f = 0.0;
  Eigen::VectorXd g;
  CurvaturePairBuffer buffer;
  /// Level-P value and gradient at x, once computed for a stopping check.
  std::optional<double> f_top;
  Eigen::VectorXd g_top;
};

/// What a caller sees after each iteration; references are valid only during
/// the callback.
struct IterationEvent {
  long k;
  int level;
  const Eigen::VectorXd& x;
  const Eigen::VectorXd& g;
  double f;
  double delta;
  const SubproblemResult& subproblem;
  double ered;
  double rho_tilde;
  bool successful;
  /// Set on unsuccessful iterations below the top level.
  std::optional<bool> precision_test_held;
  bool escalated;
  double theta;
  const CurvaturePairBuffer& hessian;
};

using IterationObserver = std::function<void(const IterationEvent&)>;

/// ered / pred, or -inf if pred <= 0 or either input is not finite.
double rho_observed(double ered, double pred) noexcept;

/// |ared - ered| with ared = f^P(x) - f^P(x + s); costs two level-P function
/// calls. Returns nullopt if f^P is not finite at either point.
std::optional<double> theta_update(const Eigen::VectorXd& x, const Eigen::VectorXd& s, double ered,
                                   Oracle& oracle);

/// theta^omega <= eta * min(pred, r_k).
bool precision_test(double theta, double pred, double r_k, const SolverConfig& config);

/// Stopping test at an iteration boundary. A small low-precision gradient is
/// confirmed with a level-P evaluation before declaring first-order success;
/// the confirmation is cached in the state until x changes.
std::optional<SolveStatus> check_termination(SolverState& state, const SolverConfig& config, Oracle& oracle,
                                             SolveCounters& counters);

/// Smallest admissible radius; below this the run stops with radius_underflow.
inline constexpr double kRadiusFloor = 0x1p-52;

/// Trust-region method with dynamic precision escalation. The oracle's
/// hierarchy must equal config.hierarchy.
SolveResult solve(const SolverConfig& config, Oracle& oracle, const IterationObserver& observer = {});

/// Classical trust-region method evaluating only at the top level of the
/// hierarchy. Same model, subproblem and constants as solve().
SolveResult solve_fixed_precision(const SolverConfig& config, Oracle& oracle,
                                  const IterationObserver& observer = {});

}  // namespace trophy

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "trophy/precision.hpp"
#include "trophy/problems.hpp"

namespace trophy {

/// Precision levels p = 0..P with strictly increasing significand widths.
class PrecisionHierarchy {
 public:
  /// Throws ConfigError if `bits` is empty, not strictly increasing, or out of range.
  explicit PrecisionHierarchy(const std::vector<int>& bits);

  [[nodiscard]] const std::vector<PrecisionLevel>& levels() const noexcept { return levels_; }
  [[nodiscard]] int size() const noexcept { return static_cast<int>(levels_.size()); }
  /// Index of the highest level, P.
  [[nodiscard]] int top() const noexcept { return size() - 1; }
  [[nodiscard]] int bits(int level) const { return levels_.at(static_cast<std::size_t>(level)).bits; }
  [[nodiscard]] std::vector<int> all_bits() const;

  friend bool operator==(const PrecisionHierarchy&, const PrecisionHierarchy&) = default;

 private:
  std::vector<PrecisionLevel> levels_;
};

/// Oracle calls per level. Indexed like the hierarchy it was created for.
struct EvalLedger {
  std::vector<int> level_bits;
  std::vector<long long> f_calls;
  std::vector<long long> g_calls;

  explicit EvalLedger(std::vector<int> bits = {});

  [[nodiscard]] long long total_f() const noexcept;
  [[nodiscard]] long long total_g() const noexcept;
};

/// Per-level cost weights for adjusted calls.
///
/// The bit-ratio kinds weigh a level by bits_p / bits_ref (or its square),
/// where bits_ref defaults to the top of the ledger's own hierarchy. A table
/// assigns absolute weights by significand width.
struct CostModel {
  enum class Kind { linear_bits, quadratic_bits, table };

  Kind kind = Kind::linear_bits;
  std::map<int, double> table;
  std::optional<int> reference_bits;

  static CostModel linear_bits();
  static CostModel quadratic_bits();
  /// Half, single and double at 1/4, 1/2 and 1.
  static CostModel paper_linear();
  /// Half, single and double at 1/16, 1/4 and 1.
  static CostModel paper_quadratic();
  /// Accepts linear, quadratic, paper-linear and paper-quadratic.
  static CostModel by_name(const std::string& name);

  /// Throws UsageError if a table model has no entry for `bits`.
  [[nodiscard]] double weight(int bits, int top_bits) const;
};

/// Weighted function-call count. Gradient calls are added at the same
/// weights when `include_gradients` is set.
double adjusted_calls(const EvalLedger& ledger, const CostModel& model, bool include_gradients = false);

/// Rounds half away from zero, the way published tables report adjusted calls.
long long display_calls(double adjusted);

/// f^p and grad f^p for one problem over one hierarchy, with per-level call
/// accounting. Non-finite results are returned unchanged; callers test them.
class Oracle {
 public:
  Oracle(ProblemSpec problem, PrecisionHierarchy hierarchy);

  double eval_f(const Eigen::VectorXd& x, int level);
  Eigen::VectorXd eval_grad(const Eigen::VectorXd& x, int level);

  [[nodiscard]] const EvalLedger& ledger() const noexcept { return ledger_; }
  [[nodiscard]] const PrecisionHierarchy& hierarchy() const noexcept { return hierarchy_; }
  [[nodiscard]] const ProblemSpec& problem() const noexcept { return problem_; }
  [[nodiscard]] int dim() const noexcept { return problem_.dim; }

 private:
  void check(const Eigen::VectorXd& x, int level) const;

  ProblemSpec problem_;
  PrecisionHierarchy hierarchy_;
  EvalLedger ledger_;
};

}  // namespace trophy

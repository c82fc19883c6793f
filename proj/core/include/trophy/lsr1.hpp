#pragma once

#include <deque>

#include <Eigen/Core>
#include <Eigen/LU>

namespace trophy {

/// Limited-memory SR1 approximation B = B0 + Psi M^{-1} Psi^T with B0 = gamma I,
/// Psi = Y - gamma S and M = D + L + L^T - gamma S^T S. Only the m curvature
/// pairs are stored; products cost O(m n).
///
/// gamma starts at the configured initial scale and is replaced by
/// y^T y / s^T y after each accepted pair with s^T y > 0. Whenever gamma or
/// the pair set changes, the stored pairs are replayed oldest first and a pair
/// contributes only if it passes the SR1 skip test against the operator built
/// from the pairs before it. The result equals the recursive SR1 matrix built
/// from the same pairs with the same rule.
class CurvaturePairBuffer {
 public:
  static constexpr double kSkipTolerance = 1e-8;
  /// r = y - B s is treated as zero when ||r|| <= kResidualFloor (||y|| + ||B s||).
  static constexpr double kResidualFloor = 1e-10;

  enum class UpdateResult { accepted, skipped };

  struct Pair {
    Eigen::VectorXd s;
    Eigen::VectorXd y;
  };

  explicit CurvaturePairBuffer(int dim, int memory = 10, double initial_scale = 1.0);

  /// Appends (s, y) iff |s^T r| >= c ||s|| ||r|| with r = y - B s and r
  /// above the residual floor.
  /// Throws UsageError on a dimension mismatch.
  UpdateResult update(const Eigen::VectorXd& s, const Eigen::VectorXd& y);

  [[nodiscard]] Eigen::VectorXd hvp(const Eigen::VectorXd& v) const;

  void reset();

  [[nodiscard]] int dim() const noexcept { return dim_; }
  [[nodiscard]] int memory() const noexcept { return memory_; }
  [[nodiscard]] double gamma() const noexcept { return gamma_; }
  [[nodiscard]] const std::deque<Pair>& pairs() const noexcept { return pairs_; }
  /// Number of stored pairs that currently contribute to the operator.
  [[nodiscard]] int active_pairs() const noexcept { return static_cast<int>(psi_.cols()); }

 private:
  void rebuild();
  bool factor();

  int dim_;
  int memory_;
  double initial_scale_;
  double gamma_;
  std::deque<Pair> pairs_;

  Eigen::MatrixXd s_active_;
  Eigen::MatrixXd y_active_;
  Eigen::MatrixXd psi_;
  Eigen::FullPivLU<Eigen::MatrixXd> middle_;
};

}  // namespace trophy

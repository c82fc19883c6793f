#pragma once

#include <functional>
#include <string_view>

#include <Eigen/Core>

namespace trophy {

using HessianOperator = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

enum class CgTermination { interior_convergence, boundary_hit, negative_curvature, max_iter };

std::string_view to_string(CgTermination t) noexcept;

struct SubproblemResult {
  Eigen::VectorXd step;
  /// m(0) - m(step) = -(g^T s + s^T H s / 2).
  double predicted_reduction = 0.0;
  CgTermination termination = CgTermination::interior_convergence;
  int cg_iterations = 0;
  /// False when the operator produced inf or NaN; the step is then zero.
  bool finite = true;
};

/// Steihaug-Toint truncated CG on min g^T s + s^T H s / 2 subject to
/// ||s|| <= delta. Stops in the interior once ||g + H s|| <= rel_tol ||g||;
/// negative curvature and boundary crossings return the boundary point along
/// the current direction.
SubproblemResult steihaug_cg(const Eigen::VectorXd& g, const HessianOperator& hvp, double delta,
                             double rel_tol, int max_iter);

/// Inexact-Newton forcing term min(0.1, sqrt(||g||)).
double default_cg_tolerance(double gnorm) noexcept;

double model_reduction(const Eigen::VectorXd& g, const HessianOperator& hvp, const Eigen::VectorXd& s);

}  // namespace trophy

#include "trophy/lsr1.hpp"

#include <cmath>
#include <string>

#include "trophy/error.hpp"

namespace trophy {

namespace {

// r = y - B s is computed with rounding; a residual at the level of that
// rounding carries no curvature information and counts as zero.
bool passes_skip_test(const Eigen::VectorXd& s, const Eigen::VectorXd& y, const Eigen::VectorXd& bs) {
  const Eigen::VectorXd r = y - bs;
  const double rnorm = r.norm();
  if (!(rnorm > CurvaturePairBuffer::kResidualFloor * (y.norm() + bs.norm())) || !std::isfinite(rnorm)) {
    return false;
  }
  return std::abs(s.dot(r)) >= CurvaturePairBuffer::kSkipTolerance * s.norm() * rnorm;
}

}  // namespace

CurvaturePairBuffer::CurvaturePairBuffer(int dim, int memory, double initial_scale)
    : dim_(dim), memory_(memory), initial_scale_(initial_scale), gamma_(initial_scale) {
  if (dim < 1) {
    throw UsageError("curvature buffer dimension must be positive");
  }
  if (memory < 1) {
    throw UsageError("curvature buffer memory must be positive");
  }
  if (!(initial_scale >= 0.0)) {
    throw UsageError("initial Hessian scale must be non-negative");
  }
  rebuild();
}

CurvaturePairBuffer::UpdateResult CurvaturePairBuffer::update(const Eigen::VectorXd& s,
                                                              const Eigen::VectorXd& y) {
  if (s.size() != dim_ || y.size() != dim_) {
    throw UsageError("curvature pair has dimension " + std::to_string(s.size()) + "/" +
                     std::to_string(y.size()) + ", buffer expects " + std::to_string(dim_));
  }
  if (!s.allFinite() || !y.allFinite() || !passes_skip_test(s, y, hvp(s))) {
    return UpdateResult::skipped;
  }

  pairs_.push_back({s, y});
  if (static_cast<int>(pairs_.size()) > memory_) {
    pairs_.pop_front();
  }
  const double sy = s.dot(y);
  if (sy > 0.0) {
    gamma_ = y.squaredNorm() / sy;
  }
  rebuild();
  return UpdateResult::accepted;
}

Eigen::VectorXd CurvaturePairBuffer::hvp(const Eigen::VectorXd& v) const {
  Eigen::VectorXd out = gamma_ * v;
  if (psi_.cols() > 0) {
    out.noalias() += psi_ * middle_.solve(psi_.transpose() * v);
  }
  return out;
}

void CurvaturePairBuffer::reset() {
  pairs_.clear();
  gamma_ = initial_scale_;
  rebuild();
}

bool CurvaturePairBuffer::factor() {
  const Eigen::Index k = s_active_.cols();
  psi_ = y_active_ - gamma_ * s_active_;
  if (k == 0) {
    return true;
  }
  const Eigen::MatrixXd sy = s_active_.transpose() * y_active_;
  Eigen::MatrixXd m = -gamma_ * (s_active_.transpose() * s_active_);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      // D on the diagonal, L below it and L^T above.
      m(i, j) += (i >= j) ? sy(i, j) : sy(j, i);
    }
  }
  // The pivots of M are the recursion denominators s_i^T r_i, which the skip
  // test already keeps away from zero relative to ||s|| ||r||. A rank
  // threshold relative to the largest pivot would reject pairs whose residual
  // is legitimately small, so only exact zeros count as singular.
  middle_.setThreshold(0.0);
  middle_.compute(m);
  return m.allFinite() && middle_.isInvertible();
}

void CurvaturePairBuffer::rebuild() {
  s_active_.resize(dim_, 0);
  y_active_.resize(dim_, 0);
  factor();
  for (const Pair& pair : pairs_) {
    if (!passes_skip_test(pair.s, pair.y, hvp(pair.s))) {
      continue;
    }
    const Eigen::Index k = s_active_.cols();
    s_active_.conservativeResize(Eigen::NoChange, k + 1);
    y_active_.conservativeResize(Eigen::NoChange, k + 1);
    s_active_.col(k) = pair.s;
    y_active_.col(k) = pair.y;
    if (!factor()) {
      // Singular middle matrix: this pair's contribution reverts to B0.
      s_active_.conservativeResize(Eigen::NoChange, k);
      y_active_.conservativeResize(Eigen::NoChange, k);
      factor();
    }
  }
}

}  // namespace trophy

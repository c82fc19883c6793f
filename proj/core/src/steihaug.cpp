#include "trophy/steihaug.hpp"

#include <algorithm>
#include <cmath>

namespace trophy {

std::string_view to_string(CgTermination t) noexcept {
  switch (t) {
    case CgTermination::interior_convergence:
      return "interior_convergence";
    case CgTermination::boundary_hit:
      return "boundary_hit";
    case CgTermination::negative_curvature:
      return "negative_curvature";
    case CgTermination::max_iter:
      return "max_iter";
  }
  return "unknown";
}

namespace {

// Positive root tau of ||z + tau d|| = delta, for ||z|| <= delta.
double to_boundary(const Eigen::VectorXd& z, const Eigen::VectorXd& d, double delta) {
  const double a = d.squaredNorm();
  const double b = 2.0 * z.dot(d);
  const double c = z.squaredNorm() - delta * delta;
  const double disc = std::sqrt(std::max(0.0, b * b - 4.0 * a * c));
  // Cancellation-free form of (-b + disc) / (2a); c <= 0 keeps it non-negative.
  if (b > 0.0) {
    return (-2.0 * c) / (b + disc);
  }
  return (-b + disc) / (2.0 * a);
}

// z + tau d, pulled back inside the ball when rounding leaves it an ulp out.
Eigen::VectorXd boundary_point(const Eigen::VectorXd& z, const Eigen::VectorXd& d, double delta) {
  Eigen::VectorXd s = z + to_boundary(z, d, delta) * d;
  while (s.norm() > delta) {
    s *= 1.0 - 0x1p-52;
  }
  return s;
}

}  // namespace

double default_cg_tolerance(double gnorm) noexcept { return std::min(0.1, std::sqrt(gnorm)); }

double model_reduction(const Eigen::VectorXd& g, const HessianOperator& hvp, const Eigen::VectorXd& s) {
  return -(g.dot(s) + 0.5 * s.dot(hvp(s)));
}

SubproblemResult steihaug_cg(const Eigen::VectorXd& g, const HessianOperator& hvp, double delta,
                             double rel_tol, int max_iter) {
  SubproblemResult out;
  const Eigen::Index n = g.size();
  out.step = Eigen::VectorXd::Zero(n);

  const double gnorm = g.norm();
  if (gnorm == 0.0) {
    return out;
  }
  const double target = rel_tol * gnorm;

  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd r = g;
  Eigen::VectorXd d = -g;
  double rr = r.squaredNorm();

  auto finish = [&](Eigen::VectorXd step, CgTermination why) {
    out.step = std::move(step);
    out.termination = why;
    const Eigen::VectorXd hs = hvp(out.step);
    out.predicted_reduction = -(g.dot(out.step) + 0.5 * out.step.dot(hs));
    out.finite = hs.allFinite() && std::isfinite(out.predicted_reduction);
    if (!out.finite) {
      out.step.setZero();
      out.predicted_reduction = 0.0;
    }
    return out;
  };

  for (int j = 0; j < max_iter; ++j) {
    const Eigen::VectorXd hd = hvp(d);
    if (!hd.allFinite()) {
      out.finite = false;
      out.cg_iterations = j;
      return out;
    }
    out.cg_iterations = j + 1;
    const double curvature = d.dot(hd);
    if (curvature <= 0.0) {
      return finish(boundary_point(z, d, delta), CgTermination::negative_curvature);
    }
    const double alpha = rr / curvature;
    Eigen::VectorXd z_next = z + alpha * d;
    if (z_next.norm() > delta) {
      return finish(boundary_point(z, d, delta), CgTermination::boundary_hit);
    }
    r += alpha * hd;
    const double rr_next = r.squaredNorm();
    if (std::sqrt(rr_next) <= target) {
      return finish(std::move(z_next), CgTermination::interior_convergence);
    }
    d = -r + (rr_next / rr) * d;
    rr = rr_next;
    z = std::move(z_next);
  }
  return finish(std::move(z), CgTermination::max_iter);
}

}  // namespace trophy

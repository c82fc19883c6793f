#include "trophy/solver.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "trophy/error.hpp"

namespace trophy {

ForcingSequence ForcingSequence::geometric(double scale, double ratio) {
  return ForcingSequence{Kind::geometric, scale, ratio};
}

ForcingSequence ForcingSequence::harmonic(double scale) { return ForcingSequence{Kind::harmonic, scale, 0.0}; }

double ForcingSequence::operator()(long k) const {
  switch (kind) {
    case Kind::geometric:
      return scale * std::pow(ratio, static_cast<double>(k));
    case Kind::harmonic:
      return scale / static_cast<double>(k + 1);
  }
  return 0.0;
}

void SolverConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("invalid solver config: " + what); };
  if (!(eta1 > 0.0 && eta1 <= eta2 && eta2 < 1.0)) fail("need 0 < eta1 <= eta2 < 1");
  if (!(gamma_inc > 1.0)) fail("need gamma_inc > 1");
  if (!(gamma_dec > 0.0 && gamma_dec < 1.0)) fail("need gamma_dec in (0, 1)");
  if (!(omega > 0.0 && omega < 1.0)) fail("need omega in (0, 1)");
  if (!(delta0 > 0.0) || !std::isfinite(delta0)) fail("need delta0 > 0");
  if (!(eps_tol > 0.0)) fail("need eps_tol > 0");
  if (max_iter < 0) fail("need max_iter >= 0");
  if (lsr1_memory < 1) fail("need lsr1_memory >= 1");
  if (!(forcing.scale >= 0.0) || !std::isfinite(forcing.scale)) fail("need a non-negative forcing scale");
  if (forcing.kind == ForcingSequence::Kind::geometric && !(forcing.ratio >= 0.0 && forcing.ratio < 1.0)) {
    fail("need a geometric forcing ratio in [0, 1)");
  }
  if (x0.size() == 0 || !x0.allFinite()) fail("need a finite, non-empty initial point");
}

std::string_view to_string(SolveStatus s) noexcept {
  switch (s) {
    case SolveStatus::first_order:
      return "first_order";
    case SolveStatus::radius_underflow:
      return "radius_underflow";
    case SolveStatus::max_iter:
      return "max_iter";
    case SolveStatus::eval_failure:
      return "eval_failure";
  }
  return "unknown";
}

double rho_observed(double ered, double pred) noexcept {
  if (!std::isfinite(ered) || !std::isfinite(pred) || !(pred > 0.0)) {
    return -std::numeric_limits<double>::infinity();
  }
  return ered / pred;
}

std::optional<double> theta_update(const Eigen::VectorXd& x, const Eigen::VectorXd& s, double ered,
                                   Oracle& oracle) {
  const int top = oracle.hierarchy().top();
  const double f_here = oracle.eval_f(x, top);
  const double f_there = oracle.eval_f(x + s, top);
  if (!std::isfinite(f_here) || !std::isfinite(f_there)) {
    return std::nullopt;
  }
  if (!std::isfinite(ered)) {
    return std::numeric_limits<double>::infinity();
  }
  const double ared = f_here - f_there;
  return std::abs(ared - ered);
}

bool precision_test(double theta, double pred, double r_k, const SolverConfig& config) {
  return std::pow(theta, config.omega) <= config.eta() * std::min(pred, r_k);
}

namespace {

struct Run {
  const SolverConfig& config;
  Oracle& oracle;
  const IterationObserver& observer;
  SolveResult result;
  SolverState state;
  int top;
  int n;

  Run(const SolverConfig& c, Oracle& o, const IterationObserver& obs)
      : config(c),
        oracle(o),
        observer(obs),
        state{c.x0, c.delta0, 0.0, 0, false, 0, 0.0, Eigen::VectorXd(), CurvaturePairBuffer(o.dim(), c.lsr1_memory),
              std::nullopt, Eigen::VectorXd()},
        top(o.hierarchy().top()),
        n(o.dim()) {
    c.validate();
    if (!(o.hierarchy() == c.hierarchy)) {
      throw UsageError("oracle hierarchy does not match solver hierarchy");
    }
    if (c.x0.size() != o.dim()) {
      throw UsageError("initial point has dimension " + std::to_string(c.x0.size()) + ", problem " +
                       o.problem().name + " expects " + std::to_string(o.dim()));
    }
  }

  double model_f(const Eigen::VectorXd& x) {
    if (state.level == top) {
      ++result.counters.top_level_model_f_evals;
    }
    return oracle.eval_f(x, state.level);
  }

  bool evaluate_current() {
    state.f = model_f(state.x);
    state.g = oracle.eval_grad(state.x, state.level);
    return std::isfinite(state.f) && state.g.allFinite();
  }

  void raise_level() {
    ++state.level;
    ++result.counters.escalations;
    if (config.reset_pairs_on_switch) {
      state.buffer.reset();
    }
  }

  // Re-evaluates at the current iterate, escalating past non-finite levels.
  bool settle_current() {
    while (!evaluate_current()) {
      if (state.level == top) {
        return false;
      }
      raise_level();
    }
    return true;
  }

  SolveResult finish(SolveStatus status) {
    result.status = status;
    result.x_final = state.x;
    result.iterations = state.k;
    result.final_level = state.level;
    if (state.level == top) {
      result.f_final = state.f;
      result.gnorm_final = state.g.norm();
    } else {
      if (!state.f_top) {
        state.f_top = oracle.eval_f(state.x, top);
        state.g_top = oracle.eval_grad(state.x, top);
        ++result.counters.top_level_checks;
      }
      result.f_final = *state.f_top;
      result.gnorm_final = state.g_top.norm();
    }
    result.ledger = oracle.ledger();
    return std::move(result);
  }

  std::optional<SolveStatus> check() { return check_termination(state, config, oracle, result.counters); }

  struct Trial {
    SubproblemResult sub;
    Eigen::VectorXd x;
    double f = 0.0;
    double ered = 0.0;
    double rho = 0.0;
  };

  Trial trial_step() {
    const HessianOperator hessian = [this](const Eigen::VectorXd& v) { return state.buffer.hvp(v); };
    Trial t;
    t.sub = steihaug_cg(state.g, hessian, state.delta, default_cg_tolerance(state.g.norm()), n);
    t.x = state.x + t.sub.step;
    if (t.sub.finite) {
      t.f = model_f(t.x);
      t.ered = state.f - t.f;
    } else {
      t.f = std::numeric_limits<double>::quiet_NaN();
      t.ered = std::numeric_limits<double>::quiet_NaN();
    }
    t.rho = rho_observed(t.ered, t.sub.predicted_reduction);
    return t;
  }

  // Accepts the trial point and collects the curvature pair at the current level.
  void accept(Trial& t, const Eigen::VectorXd& g_trial) {
    state.buffer.update(t.sub.step, g_trial - state.g);
    state.x = std::move(t.x);
    state.f = t.f;
    state.g = g_trial;
    state.f_top.reset();
  }

  // Copy of H_k for observers, taken before the pair update.
  std::optional<CurvaturePairBuffer> model_snapshot;

  void snapshot_model() {
    if (observer) {
      model_snapshot = state.buffer;
    }
  }

  void record(const Trial& t, const Eigen::VectorXd& x_k, const Eigen::VectorXd& g_k, double f_k, double delta_k,
              int level_k, bool successful, std::optional<bool> test_held, bool escalated) {
    IterationRecord rec;
    rec.k = state.k;
    rec.level = level_k;
    rec.bits = oracle.hierarchy().bits(level_k);
    rec.delta = delta_k;
    rec.rho_tilde = t.rho;
    rec.pred = t.sub.predicted_reduction;
    rec.ered = t.ered;
    rec.successful = successful;
    rec.f_est = f_k;
    rec.gnorm_est = g_k.norm();
    rec.escalated = escalated;
    result.history.push_back(rec);
    if (observer) {
      observer(IterationEvent{state.k, level_k, x_k, g_k, f_k, delta_k, t.sub, t.ered, t.rho, successful, test_held,
                              escalated, state.theta, *model_snapshot});
    }
  }
};

}  // namespace

std::optional<SolveStatus> check_termination(SolverState& state, const SolverConfig& config, Oracle& oracle,
                                             SolveCounters& counters) {
  const int top = oracle.hierarchy().top();
  if (state.g.norm() < config.eps_tol) {
    if (state.level == top) {
      return SolveStatus::first_order;
    }
    if (!state.f_top) {
      state.f_top = oracle.eval_f(state.x, top);
      state.g_top = oracle.eval_grad(state.x, top);
      ++counters.top_level_checks;
    }
    if (state.g_top.norm() < config.eps_tol) {
      return SolveStatus::first_order;
    }
  }
  if (state.delta < kRadiusFloor) {
    return SolveStatus::radius_underflow;
  }
  if (state.k >= config.max_iter) {
    return SolveStatus::max_iter;
  }
  return std::nullopt;
}

SolveResult solve(const SolverConfig& config, Oracle& oracle, const IterationObserver& observer) {
  Run run(config, oracle, observer);
  SolverState& st = run.state;
  if (!run.settle_current()) {
    return run.finish(SolveStatus::eval_failure);
  }

  for (;;) {
    if (const auto status = run.check()) {
      return run.finish(*status);
    }
    const Eigen::VectorXd x_k = st.x;
    const Eigen::VectorXd g_k = st.g;
    const double f_k = st.f;
    const double delta_k = st.delta;
    const int level_k = st.level;

    run.snapshot_model();
    Run::Trial t = run.trial_step();
    const double pred = t.sub.predicted_reduction;
    std::optional<bool> test_held;
    bool escalated = false;
    const bool successful = t.rho > config.eta1;

    if (successful) {
      const Eigen::VectorXd g_trial = oracle.eval_grad(t.x, st.level);
      run.accept(t, g_trial);
      if (t.rho > config.eta2) {
        st.delta *= config.gamma_inc;
      }
      if (!st.g.allFinite() || !std::isfinite(st.f)) {
        if (st.level == run.top) {
          run.record(t, x_k, g_k, f_k, delta_k, level_k, true, test_held, false);
          ++st.k;
          return run.finish(SolveStatus::eval_failure);
        }
        run.raise_level();
        escalated = true;
        if (!run.settle_current()) {
          run.record(t, x_k, g_k, f_k, delta_k, level_k, true, test_held, true);
          ++st.k;
          return run.finish(SolveStatus::eval_failure);
        }
      }
    } else {
      if (!st.failed_once) {
        const auto theta = theta_update(st.x, t.sub.step, t.ered, oracle);
        ++run.result.counters.theta_computations;
        if (!theta) {
          run.record(t, x_k, g_k, f_k, delta_k, level_k, false, test_held, false);
          ++st.k;
          return run.finish(SolveStatus::eval_failure);
        }
        st.theta = *theta;
        st.failed_once = true;
      }

      if (st.level == run.top) {
        st.delta *= config.gamma_dec;
      } else {
        // A non-finite estimate, or a model that predicts no decrease at this
        // level, escalates without consulting the test.
        const bool forced = !std::isfinite(t.ered) || !(pred > 0.0);
        test_held = !forced && precision_test(st.theta, pred, config.forcing(st.k), config);
        if (*test_held) {
          st.delta *= config.gamma_dec;
        } else {
          run.raise_level();
          escalated = true;
          const auto theta = theta_update(st.x, t.sub.step, t.ered, oracle);
          ++run.result.counters.theta_computations;
          if (!theta || !run.settle_current()) {
            run.record(t, x_k, g_k, f_k, delta_k, level_k, false, test_held, true);
            ++st.k;
            return run.finish(SolveStatus::eval_failure);
          }
          st.theta = *theta;
        }
      }
    }

    run.record(t, x_k, g_k, f_k, delta_k, level_k, successful, test_held, escalated);
    ++st.k;
  }
}

SolveResult solve_fixed_precision(const SolverConfig& config, Oracle& oracle, const IterationObserver& observer) {
  Run run(config, oracle, observer);
  SolverState& st = run.state;
  st.level = run.top;
  if (!run.evaluate_current()) {
    return run.finish(SolveStatus::eval_failure);
  }

  for (;;) {
    if (const auto status = run.check()) {
      return run.finish(*status);
    }
    const Eigen::VectorXd x_k = st.x;
    const Eigen::VectorXd g_k = st.g;
    const double f_k = st.f;
    const double delta_k = st.delta;

    run.snapshot_model();
    Run::Trial t = run.trial_step();
    const bool successful = t.rho > config.eta1;
    if (successful) {
      const Eigen::VectorXd g_trial = oracle.eval_grad(t.x, st.level);
      run.accept(t, g_trial);
      if (t.rho > config.eta2) {
        st.delta *= config.gamma_inc;
      }
      if (!st.g.allFinite()) {
        run.record(t, x_k, g_k, f_k, delta_k, st.level, true, std::nullopt, false);
        ++st.k;
        return run.finish(SolveStatus::eval_failure);
      }
    } else {
      st.delta *= config.gamma_dec;
    }
    run.record(t, x_k, g_k, f_k, delta_k, st.level, successful, std::nullopt, false);
    ++st.k;
  }
}

}  // namespace trophy

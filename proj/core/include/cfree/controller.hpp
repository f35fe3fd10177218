#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cfree/errors.hpp"
#include "cfree/problems.hpp"
#include "cfree/stepper.hpp"

namespace cfree {

struct ControllerConfig {
  double atol = 1e-6;
  double rtol = 1e-6;
  double fac = 0.9;
  double facmin = 0.2;
  double facmax = 5.0;
  std::optional<double> h0;
  double hmin = 1e-14;
  double hmax = std::numeric_limits<double>::infinity();
  int max_consecutive_rejects = 20;
  long max_steps = 50'000'000;

  /// Throws DomainError naming the first violated bound.
  void validate() const;
};

/// err = d(y1, yhat1) / (atol + max(|y0|, |y1|) * rtol).
template <HomogeneousAction Action>
double error_measure(const typename Action::Point& y0, const typename Action::Point& y1,
                     const typename Action::Point& yhat1, const ControllerConfig& cfg,
                     const Action& action) {
  const double sc =
      cfg.atol + std::max(action.ambient_norm(y0), action.ambient_norm(y1)) * cfg.rtol;
  return action.ambient_distance(y1, yhat1) / sc;
}

/// h * min(facmax, max(facmin, fac * err^(-1/p))) clamped to [hmin, hmax].
/// With `after_reject` the growth bound facmax is replaced by 1.
double next_step_size(double h, double err, int p, const ControllerConfig& cfg,
                      bool after_reject = false);

/// Accept/reject bookkeeping of the adaptive loop, separated from stepping.
class StepController {
 public:
  struct Decision {
    bool accepted = false;
    double h_next = 0.0;
  };

  StepController(ControllerConfig cfg, int order) : cfg_(std::move(cfg)), order_(order) {}

  /// Judges a step of size h with error estimate err. Throws NumericalError
  /// once max_consecutive_rejects is reached.
  Decision decide(double h, double err);

  [[nodiscard]] bool after_reject() const { return consecutive_rejects_ > 0; }
  [[nodiscard]] int consecutive_rejects() const { return consecutive_rejects_; }
  [[nodiscard]] const ControllerConfig& config() const { return cfg_; }

 private:
  ControllerConfig cfg_;
  int order_;
  int consecutive_rejects_ = 0;
};

struct StepAttempt {
  double t = 0.0;  ///< start of the attempted step
  double h = 0.0;
  double err = 0.0;  ///< 0 for fixed steps
  bool accepted = false;
  int n_exp = 0;
  int n_feval = 0;
};

struct Totals {
  long n_exp = 0;  ///< rejected attempts included
  long n_feval = 0;
  long n_accepted = 0;
  long n_rejected = 0;
};

template <class Point>
struct Trajectory {
  std::vector<double> times;
  std::vector<Point> points;
  std::vector<StepAttempt> attempts;
  Totals totals;

  void record(const StepAttempt& a) {
    attempts.push_back(a);
    totals.n_exp += a.n_exp;
    totals.n_feval += a.n_feval;
    (a.accepted ? totals.n_accepted : totals.n_rejected) += 1;
  }
  [[nodiscard]] const Point& back() const { return points.back(); }
};

/// Integration failure carrying the trajectory computed so far.
template <class Point>
class IntegrationFailure : public NumericalError {
 public:
  IntegrationFailure(const std::string& what, Trajectory<Point> partial)
      : NumericalError(what), partial_(std::move(partial)) {}
  [[nodiscard]] const Trajectory<Point>& partial() const { return partial_; }

 private:
  Trajectory<Point> partial_;
};

/// Controller settings as seen by a given problem: rtol is dropped where the
/// state space has no linear structure.
template <HomogeneousAction Action>
ControllerConfig effective_config(const Problem<Action>& problem, ControllerConfig cfg) {
  if (!problem.relative_tolerance) cfg.rtol = 0.0;
  return cfg;
}

/// Heuristic first step 0.01 * atol^(1/p) / |vector field at y0|, clamped to
/// [hmin, hmax] and to a tenth of the span. cfg.h0 wins when set.
template <HomogeneousAction Action>
double initial_step(const Problem<Action>& problem, const typename Action::Point& y0,
                    const ControllerConfig& cfg, int p, double t0, double t1) {
  if (cfg.h0) return *cfg.h0;
  const double speed = problem.action.ambient_norm(problem.vector_field(y0));
  const double raw = 0.01 * std::pow(cfg.atol, 1.0 / p) /
                     std::max(speed, std::numeric_limits<double>::epsilon());
  const double h = std::min(cfg.hmax, std::max(cfg.hmin, raw));
  return std::min(h, (t1 - t0) / 10.0);
}

template <class Point>
using AttemptObserver = std::function<void(const StepAttempt&, const Point& current)>;

/// Adaptive integration over [t0, t1] with an embedded pair, advancing with
/// the higher-order solution. The last step is shortened to land on t1.
template <HomogeneousAction Action>
Trajectory<typename Action::Point> integrate_adaptive(
    const StepPlan& plan, const Problem<Action>& problem, const typename Action::Point& y0,
    double t0, double t1, const ControllerConfig& config, const StepOptions& options = {},
    const AttemptObserver<typename Action::Point>& observer = {}) {
  using Point = typename Action::Point;
  using Algebra = typename Action::Algebra;
  if (!(t1 > t0)) throw DomainError("integrate_adaptive: need t1 > t0");
  if (!plan.is_pair()) throw StructuralError("integrate_adaptive: tableau '" + plan.name + "' has no embedded method");
  const ControllerConfig cfg = effective_config(problem, config);
  cfg.validate();

  Trajectory<Point> traj;
  traj.times.push_back(t0);
  traj.points.push_back(y0);
  StepController controller(cfg, plan.order);
  StepOptions step_options = options;
  step_options.embedded = true;

  double t = t0;
  Point y = y0;
  std::optional<Algebra> carried;
  double h = initial_step(problem, y0, cfg, plan.order, t0, t1);
  const double end_slack = 1e-12 * std::max(1.0, std::abs(t1));
  long steps = 0;

  while (t < t1) {
    if (++steps > cfg.max_steps) {
      throw IntegrationFailure<Point>("integrate_adaptive: step limit reached at t = " + std::to_string(t), std::move(traj));
    }
    if (h < cfg.hmin) {
      throw IntegrationFailure<Point>("integrate_adaptive: step size underflow at t = " + std::to_string(t), std::move(traj));
    }
    const bool last = t + h >= t1 - end_slack;
    const double h_try = last ? t1 - t : h;

    const auto step = cf_step(plan, problem.action, problem.f, y, h_try, carried, step_options);
    const bool finite = problem.action.is_finite(step.y1) && problem.action.is_finite(*step.yhat1);
    const double err = finite ? error_measure(y, step.y1, *step.yhat1, cfg, problem.action)
                              : std::numeric_limits<double>::infinity();

    StepAttempt attempt{t, h_try, err, false, step.n_exp, step.n_feval};
    StepController::Decision decision;
    try {
      decision = controller.decide(h_try, err);
    } catch (const NumericalError& e) {
      traj.record(attempt);
      throw IntegrationFailure<Point>(e.what(), std::move(traj));
    }
    attempt.accepted = decision.accepted;
    traj.record(attempt);
    if (observer) observer(attempt, y);

    if (decision.accepted) {
      t = last ? t1 : t + h_try;
      y = step.y1;
      if (plan.fsal) carried = step.f_last;
      traj.times.push_back(t);
      traj.points.push_back(y);
      if (last) break;
      h = decision.h_next;
    } else {
      h = decision.h_next;
    }
  }
  return traj;
}

template <HomogeneousAction Action>
Trajectory<typename Action::Point> integrate_adaptive(
    const CFTableau& pair, const Problem<Action>& problem, const typename Action::Point& y0,
    double t0, double t1, const ControllerConfig& cfg, const StepOptions& options = {},
    const AttemptObserver<typename Action::Point>& observer = {}) {
  return integrate_adaptive(plan_step(pair), problem, y0, t0, t1, cfg, options, observer);
}

enum class Advance { Principal, Embedded };

struct FixedOptions {
  Advance advance = Advance::Principal;
  bool use_cache = true;
  bool record_points = true;
};

/// n_steps equal steps without error control. With Advance::Principal the
/// embedded rows are skipped; with Advance::Embedded the trajectory follows
/// yhat1 and no FSAL value is carried.
template <HomogeneousAction Action>
Trajectory<typename Action::Point> integrate_fixed(const StepPlan& plan,
                                                   const Problem<Action>& problem,
                                                   const typename Action::Point& y0, double t0,
                                                   double t1, long n_steps,
                                                   const FixedOptions& options = {}) {
  using Point = typename Action::Point;
  using Algebra = typename Action::Algebra;
  if (n_steps < 1) throw DomainError("integrate_fixed: n_steps must be at least 1");
  if (options.advance == Advance::Embedded && !plan.is_pair()) {
    throw StructuralError("integrate_fixed: tableau '" + plan.name + "' has no embedded method");
  }
  const bool embedded = options.advance == Advance::Embedded;
  const StepOptions step_options{options.use_cache, embedded};
  const double h = (t1 - t0) / static_cast<double>(n_steps);

  Trajectory<Point> traj;
  traj.times.push_back(t0);
  traj.points.push_back(y0);
  Point y = y0;
  std::optional<Algebra> carried;
  for (long i = 0; i < n_steps; ++i) {
    const double t = t0 + static_cast<double>(i) * h;
    const auto step = cf_step(plan, problem.action, problem.f, y, h, carried, step_options);
    traj.record({t, h, 0.0, true, step.n_exp, step.n_feval});
    y = embedded ? *step.yhat1 : step.y1;
    if (!problem.action.is_finite(y)) {
      throw IntegrationFailure<Point>("integrate_fixed: non-finite state at t = " + std::to_string(t + h), std::move(traj));
    }
    if (!embedded && plan.fsal) carried = step.f_last;
    const double t_next = i + 1 == n_steps ? t1 : t0 + static_cast<double>(i + 1) * h;
    if (options.record_points || i + 1 == n_steps) {
      traj.times.push_back(t_next);
      traj.points.push_back(y);
    }
  }
  return traj;
}

template <HomogeneousAction Action>
Trajectory<typename Action::Point> integrate_fixed(const CFTableau& method,
                                                   const Problem<Action>& problem,
                                                   const typename Action::Point& y0, double t0,
                                                   double t1, long n_steps,
                                                   const FixedOptions& options = {}) {
  return integrate_fixed(plan_step(method), problem, y0, t0, t1, n_steps, options);
}

}  // namespace cfree

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cfree/lie/action.hpp"
#include "cfree/tableau.hpp"

namespace cfree {

/// One exponential row reduced to its nonzero terms.
struct PlannedRow {
  RowRef ref;
  /// (k, coefficient) pairs, k 0-based into the stage values; slot s is f(y1).
  std::vector<std::pair<int, double>> terms;
  /// Reuse group shared by rows declared identical, or -1.
  int cache_group = -1;

  [[nodiscard]] bool is_identity() const { return terms.empty(); }
};

/// A tableau compiled for stepping: zero rows marked, reuse groups resolved.
struct StepPlan {
  std::string name;
  int stages = 0;
  bool fsal = false;
  int order = 0;
  int embedded_order = 0;
  std::vector<std::vector<PlannedRow>> stage_rows;  ///< index r-1, empty for r = 1
  std::vector<PlannedRow> update;
  std::vector<PlannedRow> embedded;
  int cache_groups = 0;

  [[nodiscard]] bool is_pair() const { return !embedded.empty(); }
};

/// Validates the tableau structure and resolves reuse groups from its
/// declared reuse pairs (never from floating-point coincidence).
StepPlan plan_step(const CFTableau& tableau);

/// Reuse group of a row in the plan, or -1 when the row shares with nothing.
int plan_cache_group(const StepPlan& plan, const RowRef& ref);

struct StepOptions {
  bool use_cache = true;  ///< reuse exponentials of rows declared identical
  bool embedded = true;   ///< also compute yhat1
};

struct Budget {
  int exp_per_step = 0;
  int feval_per_step = 0;
};

/// Static exponential and f-evaluation count of one step, assuming a carried
/// FSAL value and the given options.
Budget count_budget(const CFTableau& tableau, const StepOptions& options = {});
Budget count_budget(const StepPlan& plan, const StepOptions& options = {}, bool carried_f = true);

template <HomogeneousAction Action>
struct StepResult {
  typename Action::Point y1;
  std::optional<typename Action::Point> yhat1;
  /// f(y1), present for FSAL tableaux.
  std::optional<typename Action::Algebra> f_last;
  int n_exp = 0;
  int n_feval = 0;
};

/// One step of a commutator-free method.
///
/// Each row j of a stage or update is turned into h * sum_k coeff_k f_k,
/// exponentiated and applied to the running point, row 1 first. `carried_f`
/// must equal f(y) when given.
template <HomogeneousAction Action, class F>
StepResult<Action> cf_step(const StepPlan& plan, const Action& action, const F& f,
                           const typename Action::Point& y, double h,
                           const std::optional<typename Action::Algebra>& carried_f,
                           const StepOptions& options = {}) {
  using Algebra = typename Action::Algebra;
  using Group = typename Action::Group;
  using Point = typename Action::Point;

  StepResult<Action> out;
  std::vector<Algebra> fs;
  fs.reserve(static_cast<std::size_t>(plan.stages) + 1);
  if (carried_f) {
    fs.push_back(*carried_f);
  } else {
    fs.push_back(f(y));
    ++out.n_feval;
  }

  std::vector<std::optional<Group>> cache(static_cast<std::size_t>(plan.cache_groups));
  auto group_of = [&](const PlannedRow& row) -> Group {
    const bool cached = options.use_cache && row.cache_group >= 0;
    if (cached) {
      if (auto& hit = cache[static_cast<std::size_t>(row.cache_group)]) return *hit;
    }
    Algebra sum = action.algebra_zero();
    for (const auto& [k, coeff] : row.terms) {
      sum = action.algebra_axpy(h * coeff, fs[static_cast<std::size_t>(k)], sum);
    }
    Group g = action.exp(sum);
    ++out.n_exp;
    if (cached) cache[static_cast<std::size_t>(row.cache_group)] = g;
    return g;
  };
  auto apply_rows = [&](const std::vector<PlannedRow>& rows) {
    Point p = y;
    for (const PlannedRow& row : rows) {
      if (row.is_identity()) continue;
      p = action.act(group_of(row), p);
    }
    return p;
  };

  for (int r = 2; r <= plan.stages; ++r) {
    const Point stage_point = apply_rows(plan.stage_rows[static_cast<std::size_t>(r - 1)]);
    fs.push_back(f(stage_point));
    ++out.n_feval;
  }
  out.y1 = apply_rows(plan.update);
  if (plan.fsal) {
    out.f_last = f(out.y1);
    ++out.n_feval;
    fs.push_back(*out.f_last);
  }
  if (options.embedded && plan.is_pair()) out.yhat1 = apply_rows(plan.embedded);
  return out;
}

template <HomogeneousAction Action, class F>
StepResult<Action> cf_step(const CFTableau& tableau, const Action& action, const F& f,
                           const typename Action::Point& y, double h,
                           const std::optional<typename Action::Algebra>& carried_f,
                           const StepOptions& options = {}) {
  return cf_step(plan_step(tableau), action, f, y, h, carried_f, options);
}

}  // namespace cfree

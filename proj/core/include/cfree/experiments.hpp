#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cfree/controller.hpp"
#include "cfree/order_conditions.hpp"
#include "cfree/problems.hpp"
#include "cfree/reference.hpp"
#include "cfree/stepper.hpp"

namespace cfree {

enum class Mode { Integrate, Convergence, WorkPrecision, Needle, TableauCheck };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

struct ExperimentConfig {
  Mode mode = Mode::Integrate;
  std::string problem = "rigid-body";  ///< rigid-body | van-der-pol | heavy-top
  std::map<std::string, double> params;  ///< overrides of the problem defaults
  std::vector<double> y0;               ///< empty: problem default
  std::string tableau = "cf32a";        ///< catalog name or JSON file path
  std::vector<double> tols;
  std::vector<long> steps;
  bool fixed = false;  ///< work-precision: sweep step counts instead of tolerances
  std::string advance = "principal";  ///< convergence / fixed: principal | embedded
  double t0 = 0.0;
  double t1 = 2.0;
  std::optional<double> atol;
  std::optional<double> rtol;
  std::optional<double> h0;
  std::optional<double> hmax;
  std::uint64_t seed = 20140623;
  std::string out;  ///< empty: standard output
  std::string format = "csv";
  bool parallel = true;
  double window_lo = 1.4;  ///< needle window
  double window_hi = 1.56;

  /// Throws InputError for missing lists or unknown names.
  void validate() const;
};

/// Config as JSON text with every defaulted field resolved.
std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const std::string& text);

struct ResultRow {
  std::vector<double> values;
  std::string error;  ///< nonempty marks a failed sweep entry
};

struct ResultTable {
  std::string kind;
  std::vector<std::string> columns;
  std::vector<ResultRow> rows;
  std::vector<std::pair<std::string, double>> summary;
  std::vector<std::string> notes;

  [[nodiscard]] bool failed() const {
    return std::any_of(rows.begin(), rows.end(), [](const ResultRow& r) { return !r.error.empty(); });
  }
  [[nodiscard]] std::optional<double> summary_value(const std::string& key) const;
};

/// CSV: a "# {config}" line, the header, one line per row. Failed rows carry
/// "error" in every value column and their message in a trailing comment.
std::string render_csv(const ResultTable& table, const std::string& config_json);
/// JSON object {config, columns, rows, summary, notes}.
std::string render_json(const ResultTable& table, const std::string& config_json);

/// Least-squares slope of log(y) against log(x) over pairs with x, y > 0.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Runs `task(i)` for i < n, concurrently when `parallel`, results in index order.
template <class T>
std::vector<T> run_sweep(std::size_t n, bool parallel, const std::function<T(std::size_t)>& task) {
  std::vector<T> out;
  out.reserve(n);
  if (!parallel || n < 2) {
    for (std::size_t i = 0; i < n; ++i) out.push_back(task(i));
    return out;
  }
  std::vector<std::future<T>> futures;
  futures.reserve(n);
  for (std::size_t i = 0; i < n; ++i) futures.push_back(std::async(std::launch::async, task, i));
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

inline const std::vector<std::string> kConvergenceColumns{"h", "global_error", "local_slope"};
inline const std::vector<std::string> kWorkPrecisionColumns{"tol", "global_error", "n_exp", "n_feval", "n_steps", "n_rejected"};

/// Sweep whose every entry failed for the same reason, e.g. when no
/// reference solution could be computed. `xs` fills the first column.
ResultTable failed_sweep(const std::string& kind, const std::vector<std::string>& columns,
                         const std::vector<double>& xs, const std::string& error);

namespace detail {
inline std::string describe(const std::exception& e) { return e.what(); }
inline constexpr double nan = std::numeric_limits<double>::quiet_NaN();
}  // namespace detail

/// Fixed-step errors at t1 against `reference` for each step count.
template <HomogeneousAction Action>
ResultTable convergence_table(const StepPlan& plan, const Problem<Action>& problem,
                              const typename Action::Point& y0, double t0, double t1,
                              const std::vector<long>& steps, Advance advance,
                              const typename Action::Point& reference, bool parallel = true) {
  ResultTable table;
  table.kind = "convergence";
  table.columns = kConvergenceColumns;
  auto rows = run_sweep<ResultRow>(steps.size(), parallel, [&](std::size_t i) {
    const double h = (t1 - t0) / static_cast<double>(steps[i]);
    try {
      FixedOptions opts;
      opts.advance = advance;
      opts.record_points = false;
      const auto traj = integrate_fixed(plan, problem, y0, t0, t1, steps[i], opts);
      return ResultRow{{h, problem.action.ambient_distance(traj.back(), reference), detail::nan}, {}};
    } catch (const std::exception& e) {
      return ResultRow{{h, detail::nan, detail::nan}, detail::describe(e)};
    }
  });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& prev = rows[i - 1].values;
    auto& cur = rows[i].values;
    if (prev[1] > 0.0 && cur[1] > 0.0) cur[2] = std::log(prev[1] / cur[1]) / std::log(prev[0] / cur[0]);
  }
  std::vector<double> hs, errs;
  for (const auto& r : rows) {
    if (r.error.empty()) {
      hs.push_back(r.values[0]);
      errs.push_back(r.values[1]);
    }
  }
  table.rows = std::move(rows);
  table.summary.emplace_back("fitted_slope", loglog_slope(hs, errs));
  return table;
}

/// One adaptive run per tolerance (atol = rtol = tol), error at t1.
template <HomogeneousAction Action>
ResultTable work_precision_table(const StepPlan& plan, const Problem<Action>& problem,
                                 const typename Action::Point& y0, double t0, double t1,
                                 const std::vector<double>& tols, const ControllerConfig& base,
                                 const typename Action::Point& reference, bool parallel = true) {
  ResultTable table;
  table.kind = "work-precision";
  table.columns = kWorkPrecisionColumns;
  table.rows = run_sweep<ResultRow>(tols.size(), parallel, [&](std::size_t i) {
    const double tol = tols[i];
    try {
      ControllerConfig cfg = base;
      cfg.atol = tol;
      cfg.rtol = tol;
      const auto traj = integrate_adaptive(plan, problem, y0, t0, t1, cfg);
      const auto& tot = traj.totals;
      return ResultRow{{tol, problem.action.ambient_distance(traj.back(), reference),
                        static_cast<double>(tot.n_exp), static_cast<double>(tot.n_feval),
                        static_cast<double>(tot.n_accepted), static_cast<double>(tot.n_rejected)},
                       {}};
    } catch (const std::exception& e) {
      return ResultRow{{tol, detail::nan, detail::nan, detail::nan, detail::nan, detail::nan},
                       detail::describe(e)};
    }
  });
  std::vector<double> xs, errs;
  for (const auto& r : table.rows) {
    if (r.error.empty()) {
      xs.push_back(r.values[0]);
      errs.push_back(r.values[1]);
    }
  }
  table.summary.emplace_back("fitted_slope", loglog_slope(xs, errs));
  return table;
}

/// Fixed-step counterpart of work_precision_table: the tol column holds h.
template <HomogeneousAction Action>
ResultTable fixed_work_table(const StepPlan& plan, const Problem<Action>& problem,
                             const typename Action::Point& y0, double t0, double t1,
                             const std::vector<long>& steps, Advance advance,
                             const typename Action::Point& reference, bool parallel = true) {
  ResultTable table;
  table.kind = "work-precision";
  table.columns = kWorkPrecisionColumns;
  table.notes.push_back("fixed-step sweep: the tol column holds the step size h");
  table.rows = run_sweep<ResultRow>(steps.size(), parallel, [&](std::size_t i) {
    const double h = (t1 - t0) / static_cast<double>(steps[i]);
    try {
      FixedOptions opts;
      opts.advance = advance;
      opts.record_points = false;
      const auto traj = integrate_fixed(plan, problem, y0, t0, t1, steps[i], opts);
      const auto& tot = traj.totals;
      return ResultRow{{h, problem.action.ambient_distance(traj.back(), reference),
                        static_cast<double>(tot.n_exp), static_cast<double>(tot.n_feval),
                        static_cast<double>(tot.n_accepted), 0.0},
                       {}};
    } catch (const std::exception& e) {
      return ResultRow{{h, detail::nan, detail::nan, detail::nan, detail::nan, detail::nan},
                       detail::describe(e)};
    }
  });
  return table;
}

/// Every attempted step of one adaptive run on a planar problem. Rejected
/// attempts keep the current t and state.
template <HomogeneousAction Action>
ResultTable needle_table(const StepPlan& plan, const Problem<Action>& problem,
                         const typename Action::Point& y0, double t0, double t1,
                         const ControllerConfig& cfg, double window_lo, double window_hi) {
  ResultTable table;
  table.kind = "needle";
  table.columns = {"t", "h", "accepted", "y1", "y2", "err"};
  Trajectory<typename Action::Point> traj;
  try {
    traj = integrate_adaptive(plan, problem, y0, t0, t1, cfg);
  } catch (const IntegrationFailure<typename Action::Point>& e) {
    traj = e.partial();
    table.rows.push_back({{detail::nan, detail::nan, detail::nan, detail::nan, detail::nan, detail::nan},
                          e.what()});
  }
  std::vector<ResultRow> rows;
  std::size_t k = 0;
  std::vector<double> accepted_h;
  double window_min = std::numeric_limits<double>::infinity();
  for (const auto& a : traj.attempts) {
    if (a.accepted) {
      ++k;
      accepted_h.push_back(a.h);
      if (a.t >= window_lo && a.t <= window_hi) window_min = std::min(window_min, a.h);
    }
    const auto c = coords(traj.points[k]);
    rows.push_back({{traj.times[k], a.h, a.accepted ? 1.0 : 0.0, c.at(0), c.at(1), a.err}, {}});
  }
  rows.insert(rows.end(), table.rows.begin(), table.rows.end());
  table.rows = std::move(rows);

  double median = detail::nan;
  if (!accepted_h.empty()) {
    std::vector<double> sorted = accepted_h;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size();
    median = m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
  }
  const double attempts = static_cast<double>(traj.attempts.size());
  table.summary = {{"n_attempts", attempts},
                   {"n_accepted", static_cast<double>(traj.totals.n_accepted)},
                   {"n_rejected", static_cast<double>(traj.totals.n_rejected)},
                   {"reject_fraction", attempts > 0 ? static_cast<double>(traj.totals.n_rejected) / attempts : 0.0},
                   {"min_h_window", std::isfinite(window_min) ? window_min : detail::nan},
                   {"median_h", median},
                   {"window_ratio", std::isfinite(window_min) ? window_min / median : detail::nan},
                   {"n_exp", static_cast<double>(traj.totals.n_exp)}};
  return table;
}

struct TableauCheck {
  CFTableau tableau;
  OrderReport principal;
  std::optional<OrderReport> embedded;
  double tolerance = 0.0;
  Budget budget;
  Budget budget_without_reuse;
  std::vector<ReusePair> undeclared_identical;

  [[nodiscard]] std::string render_text() const;
  [[nodiscard]] std::string render_json() const;
};

TableauCheck check_tableau(const CFTableau& tableau);

/// Catalog name or path to a JSON tableau file.
CFTableau resolve_tableau(const std::string& name_or_path);

ResultTable run_integrate(const ExperimentConfig& config);
ResultTable run_convergence(const ExperimentConfig& config);
ResultTable run_work_precision(const ExperimentConfig& config);
ResultTable run_needle(const ExperimentConfig& config);
TableauCheck run_tableau_check(const ExperimentConfig& config);

}  // namespace cfree

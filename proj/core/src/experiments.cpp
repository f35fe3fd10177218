#include "cfree/experiments.hpp"

#include <filesystem>
#include <set>
#include <sstream>
#include <type_traits>

#include <json.hpp>

#include "cfree/catalog.hpp"
#include "cfree/errors.hpp"
#include "cfree/tableau_json.hpp"

namespace cfree {

using nlohmann::json;

namespace {

constexpr std::pair<Mode, std::string_view> kModes[] = {
    {Mode::Integrate, "integrate"},
    {Mode::Convergence, "convergence"},
    {Mode::WorkPrecision, "work-precision"},
    {Mode::Needle, "needle"},
    {Mode::TableauCheck, "tableau-check"},
};

const std::map<std::string, std::set<std::string>>& known_params() {
  static const std::map<std::string, std::set<std::string>> k = {
      {"rigid-body", {"I1", "I2", "I3", "m"}},
      {"van-der-pol", {"mu"}},
      {"heavy-top", {"I1", "I2", "I3", "m", "g", "chi1", "chi2", "chi3"}},
  };
  return k;
}

double param(const ExperimentConfig& c, const char* key, double fallback) {
  const auto it = c.params.find(key);
  return it == c.params.end() ? fallback : it->second;
}

Advance parse_advance(const std::string& s) {
  if (s == "principal") return Advance::Principal;
  if (s == "embedded") return Advance::Embedded;
  throw InputError("advance must be 'principal' or 'embedded', got '" + s + "'");
}

ControllerConfig controller_from(const ExperimentConfig& c) {
  ControllerConfig cfg;
  cfg.atol = c.atol.value_or(1e-6);
  cfg.rtol = c.rtol.value_or(cfg.atol);
  cfg.h0 = c.h0;
  if (c.hmax) cfg.hmax = *c.hmax;
  return cfg;
}

template <class Point>
Point initial_point(const ExperimentConfig& c, Point fallback) {
  if (c.y0.empty()) return fallback;
  const std::size_t n = coords(fallback).size();
  if (c.y0.size() != n) {
    throw InputError("y0 for " + c.problem + " needs " + std::to_string(n) + " values, got " +
                     std::to_string(c.y0.size()));
  }
  return from_coords(c.y0, PointTag<Point>{});
}

/// Calls visit(problem, y0) with the configured problem.
template <class Visitor>
auto with_problem(const ExperimentConfig& c, Visitor&& visit) {
  if (c.problem == "rigid-body") {
    RigidBodyParams p;
    p.inertia = {param(c, "I1", 1.0), param(c, "I2", 2.0), param(c, "I3", 5.0)};
    p.mass = param(c, "m", 1.0);
    const auto problem = rigid_body(p);
    return visit(problem, initial_point(c, random_unit_vector(c.seed)));
  }
  if (c.problem == "van-der-pol") {
    VdpParams p;
    p.mu = param(c, "mu", 60.0);
    const auto problem = van_der_pol(p);
    return visit(problem, initial_point(c, van_der_pol_initial()));
  }
  if (c.problem == "heavy-top") {
    HeavyTopParams p;
    p.inertia = {param(c, "I1", 2.0), param(c, "I2", 2.0), param(c, "I3", 1.0)};
    p.mass = param(c, "m", 1.0);
    p.gravity = param(c, "g", 1.0);
    p.chi = {param(c, "chi1", 1.0), param(c, "chi2", 0.0), param(c, "chi3", 0.0)};
    const auto problem = heavy_top(p);
    return visit(problem, initial_point(c, heavy_top_initial()));
  }
  throw InputError("unknown problem '" + c.problem + "' (rigid-body, van-der-pol, heavy-top)");
}

std::string cell(double v) {
  if (std::isnan(v)) return "nan";
  return format_double(v);
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string_view to_string(Mode mode) {
  for (const auto& [m, name] : kModes) {
    if (m == mode) return name;
  }
  return "unknown";
}

Mode parse_mode(std::string_view text) {
  for (const auto& [m, name] : kModes) {
    if (name == text) return m;
  }
  throw InputError("unknown mode '" + std::string(text) + "'");
}

void ExperimentConfig::validate() const {
  const auto& known = known_params();
  const auto it = known.find(problem);
  if (it == known.end()) throw InputError("unknown problem '" + problem + "' (rigid-body, van-der-pol, heavy-top)");
  for (const auto& [k, v] : params) {
    if (!it->second.count(k)) throw InputError("problem " + problem + " has no parameter '" + k + "'");
  }
  if (format != "csv" && format != "json") throw InputError("format must be csv or json, got '" + format + "'");
  parse_advance(advance);
  if (mode != Mode::TableauCheck && !(t1 > t0)) throw InputError("need t1 > t0");
  if (mode == Mode::Convergence && steps.empty()) throw InputError("convergence needs at least one step count");
  if (mode == Mode::WorkPrecision) {
    if (fixed && steps.empty()) throw InputError("fixed-step work-precision needs at least one step count");
    if (!fixed && tols.empty()) throw InputError("work-precision needs at least one tolerance");
  }
  for (double t : tols) {
    if (!(t > 0.0)) throw InputError("tolerances must be positive");
  }
  for (long n : steps) {
    if (n < 1) throw InputError("step counts must be positive");
  }
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["mode"] = std::string(to_string(c.mode));
  j["problem"] = c.problem;
  json params = json::object();
  with_problem(c, [&](const auto& problem, const auto& y0) {
    for (const auto& [k, v] : problem.parameters) params[k] = v;
    j["y0"] = coords(y0);
    return 0;
  });
  j["params"] = params;
  j["tableau"] = c.tableau;
  j["tols"] = c.tols;
  j["steps"] = c.steps;
  j["fixed"] = c.fixed;
  j["advance"] = c.advance;
  j["t0"] = c.t0;
  j["t1"] = c.t1;
  const ControllerConfig cfg = controller_from(c);
  j["atol"] = cfg.atol;
  j["rtol"] = cfg.rtol;
  j["h0"] = c.h0 ? json(*c.h0) : json(nullptr);
  j["hmax"] = number_or_null(cfg.hmax);
  j["fac"] = cfg.fac;
  j["facmin"] = cfg.facmin;
  j["facmax"] = cfg.facmax;
  j["max_consecutive_rejects"] = cfg.max_consecutive_rejects;
  j["seed"] = c.seed;
  j["format"] = c.format;
  j["window"] = {c.window_lo, c.window_hi};
  return j.dump();
}

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("experiment config: ") + e.what());
  }
  if (!j.is_object()) throw InputError("experiment config must be a JSON object");
  ExperimentConfig c;
  try {
    if (j.contains("mode")) c.mode = parse_mode(j["mode"].get<std::string>());
    if (j.contains("problem")) c.problem = j["problem"].get<std::string>();
    if (j.contains("params")) c.params = j["params"].get<std::map<std::string, double>>();
    if (j.contains("y0")) c.y0 = j["y0"].get<std::vector<double>>();
    if (j.contains("tableau")) c.tableau = j["tableau"].get<std::string>();
    if (j.contains("tols")) c.tols = j["tols"].get<std::vector<double>>();
    if (j.contains("steps")) c.steps = j["steps"].get<std::vector<long>>();
    if (j.contains("fixed")) c.fixed = j["fixed"].get<bool>();
    if (j.contains("advance")) c.advance = j["advance"].get<std::string>();
    if (j.contains("t0")) c.t0 = j["t0"].get<double>();
    if (j.contains("t1")) c.t1 = j["t1"].get<double>();
    if (j.contains("atol")) c.atol = j["atol"].get<double>();
    if (j.contains("rtol")) c.rtol = j["rtol"].get<double>();
    if (j.contains("h0") && !j["h0"].is_null()) c.h0 = j["h0"].get<double>();
    if (j.contains("hmax") && !j["hmax"].is_null()) c.hmax = j["hmax"].get<double>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("out")) c.out = j["out"].get<std::string>();
    if (j.contains("format")) c.format = j["format"].get<std::string>();
    if (j.contains("window")) {
      const auto w = j["window"].get<std::vector<double>>();
      if (w.size() != 2) throw InputError("window needs two values");
      c.window_lo = w[0];
      c.window_hi = w[1];
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("experiment config: ") + e.what());
  }
  return c;
}

std::optional<double> ResultTable::summary_value(const std::string& key) const {
  for (const auto& [k, v] : summary) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string render_csv(const ResultTable& table, const std::string& config_json) {
  std::ostringstream out;
  out << "# " << config_json << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.values.size(); ++i) {
      out << (i ? "," : "");
      if (!row.error.empty() && i > 0) {
        out << "error";
      } else {
        out << cell(row.values[i]);
      }
    }
    out << '\n';
    if (!row.error.empty()) out << "# error: " << row.error << '\n';
  }
  for (const auto& note : table.notes) out << "# note: " << note << '\n';
  for (const auto& [k, v] : table.summary) out << "# summary " << k << " = " << cell(v) << '\n';
  return out.str();
}

std::string render_json(const ResultTable& table, const std::string& config_json) {
  json j;
  j["config"] = json::parse(config_json);
  j["kind"] = table.kind;
  j["columns"] = table.columns;
  json rows = json::array();
  for (const auto& row : table.rows) {
    json r = json::object();
    for (std::size_t i = 0; i < table.columns.size() && i < row.values.size(); ++i) {
      r[table.columns[i]] = number_or_null(row.values[i]);
    }
    if (!row.error.empty()) r["error"] = row.error;
    rows.push_back(r);
  }
  j["rows"] = rows;
  json summary = json::object();
  for (const auto& [k, v] : table.summary) summary[k] = number_or_null(v);
  j["summary"] = summary;
  j["notes"] = table.notes;
  return j.dump(2) + "\n";
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) continue;
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / denom;
}

CFTableau resolve_tableau(const std::string& name_or_path) {
  for (const auto& t : catalog()) {
    if (t.name == name_or_path) return t;
  }
  if (std::filesystem::exists(name_or_path)) return load_tableau_file(name_or_path);
  std::string names;
  for (const auto& t : catalog()) names += (names.empty() ? "" : ", ") + t.name;
  throw InputError("'" + name_or_path + "' is neither a catalog tableau (" + names + ") nor a readable file");
}

TableauCheck check_tableau(const CFTableau& tableau) {
  validate_structure(tableau);
  TableauCheck out;
  out.tableau = tableau;
  out.tolerance = certification_tolerance(tableau);
  out.principal = certify(tableau, Part::Update, out.tolerance);
  if (tableau.is_pair()) out.embedded = certify(tableau, Part::Embedded, out.tolerance);
  out.budget = count_budget(tableau);
  out.budget_without_reuse = count_budget(tableau, StepOptions{false, true});
  const StepPlan plan = plan_step(tableau);
  for (const auto& pair : scan_identical_rows(tableau, 1e-14)) {
    const int a = plan_cache_group(plan, pair.first);
    if (a < 0 || a != plan_cache_group(plan, pair.second)) out.undeclared_identical.push_back(pair);
  }
  return out;
}

namespace {

void render_report(std::ostringstream& out, const char* title, const OrderReport& r, double tol) {
  out << title << ": certified order " << r.certified_order << '\n';
  for (const auto& res : r.classical) {
    out << "  [" << (std::abs(res.value) <= tol ? "ok" : "FAIL") << "] " << res.label << "  residual "
        << cell(res.value) << '\n';
  }
  for (const auto& res : r.nonclassical) {
    out << "  [" << (std::abs(res.value) <= tol ? "ok" : "FAIL") << "] " << res.label << "  residual "
        << cell(res.value) << '\n';
  }
  for (const auto& n : r.notes) out << "  note: " << n << '\n';
}

json report_json(const OrderReport& r, double tol) {
  json j;
  j["certified_order"] = r.certified_order;
  auto residuals = [](const std::vector<Residual>& v) {
    json a = json::array();
    for (const auto& res : v) a.push_back({{"label", res.label}, {"order", res.order}, {"residual", res.value}});
    return a;
  };
  j["classical"] = residuals(r.classical);
  j["nonclassical"] = residuals(r.nonclassical);
  j["violated"] = r.violated(tol);
  j["notes"] = r.notes;
  return j;
}

}  // namespace

std::string TableauCheck::render_text() const {
  std::ostringstream out;
  out << "tableau " << tableau.name << " (s = " << tableau.stages << ", order " << tableau.order;
  if (tableau.is_pair()) out << "(" << tableau.embedded_order << ")";
  out << (tableau.fsal ? ", FSAL" : "") << ")\n";
  out << "tolerance " << cell(tolerance) << (tableau.printed_decimal ? " (printed decimals)" : "") << '\n';
  render_report(out, "principal", principal, tolerance);
  if (embedded) render_report(out, "embedded", *embedded, tolerance);
  out << "reuse map:";
  if (tableau.reuse.empty()) out << " none";
  for (const auto& [a, b] : tableau.reuse) out << ' ' << to_string(a) << '=' << to_string(b);
  out << '\n';
  out << "undeclared identical rows:";
  if (undeclared_identical.empty()) out << " none";
  for (const auto& [a, b] : undeclared_identical) out << ' ' << to_string(a) << '=' << to_string(b);
  out << '\n';
  out << "budget per step: " << budget.exp_per_step << " exponentials, " << budget.feval_per_step
      << " f evaluations (" << budget_without_reuse.exp_per_step << " exponentials without reuse)\n";
  return out.str();
}

std::string TableauCheck::render_json() const {
  json j;
  j["tableau"] = tableau.name;
  j["stages"] = tableau.stages;
  j["order"] = tableau.order;
  j["embedded_order"] = tableau.embedded_order;
  j["fsal"] = tableau.fsal;
  j["tolerance"] = tolerance;
  j["principal"] = report_json(principal, tolerance);
  if (embedded) j["embedded"] = report_json(*embedded, tolerance);
  json reuse = json::array();
  for (const auto& [a, b] : tableau.reuse) reuse.push_back({to_string(a), to_string(b)});
  j["reuse_map"] = reuse;
  json undeclared = json::array();
  for (const auto& [a, b] : undeclared_identical) undeclared.push_back({to_string(a), to_string(b)});
  j["undeclared_identical"] = undeclared;
  j["exp_per_step"] = budget.exp_per_step;
  j["feval_per_step"] = budget.feval_per_step;
  j["exp_per_step_without_reuse"] = budget_without_reuse.exp_per_step;
  return j.dump(2) + "\n";
}

ResultTable run_integrate(const ExperimentConfig& config) {
  config.validate();
  const StepPlan plan = plan_step(resolve_tableau(config.tableau));
  return with_problem(config, [&](const auto& problem, const auto& y0) {
    auto traj = config.steps.empty()
                    ? integrate_adaptive(plan, problem, y0, config.t0, config.t1, controller_from(config))
                    : integrate_fixed(plan, problem, y0, config.t0, config.t1, config.steps.front(),
                                      FixedOptions{parse_advance(config.advance), true, true});
    ResultTable table;
    table.kind = "integrate";
    table.columns = {"t"};
    const std::size_t dim = coords(y0).size();
    for (std::size_t i = 0; i < dim; ++i) table.columns.push_back("y" + std::to_string(i + 1));
    for (std::size_t k = 0; k < traj.points.size(); ++k) {
      ResultRow row{{traj.times[k]}, {}};
      for (double v : coords(traj.points[k])) row.values.push_back(v);
      table.rows.push_back(std::move(row));
    }
    const auto& tot = traj.totals;
    table.summary = {{"n_exp", static_cast<double>(tot.n_exp)},
                     {"n_feval", static_cast<double>(tot.n_feval)},
                     {"n_accepted", static_cast<double>(tot.n_accepted)},
                     {"n_rejected", static_cast<double>(tot.n_rejected)}};
    const auto start = conserved(problem, traj.points.front());
    const auto end = conserved(problem, traj.back());
    for (const auto& [k, v] : end) table.summary.emplace_back("drift_" + k, v - start.at(k));
    return table;
  });
}

ResultTable failed_sweep(const std::string& kind, const std::vector<std::string>& columns,
                         const std::vector<double>& xs, const std::string& error) {
  ResultTable table;
  table.kind = kind;
  table.columns = columns;
  for (double x : xs) {
    ResultRow row{std::vector<double>(columns.size(), detail::nan), error};
    row.values[0] = x;
    table.rows.push_back(std::move(row));
  }
  return table;
}

namespace {
std::vector<double> step_sizes(const ExperimentConfig& c) {
  std::vector<double> hs;
  for (long n : c.steps) hs.push_back((c.t1 - c.t0) / static_cast<double>(n));
  return hs;
}
}  // namespace

ResultTable run_convergence(const ExperimentConfig& config) {
  config.validate();
  const StepPlan plan = plan_step(resolve_tableau(config.tableau));
  return with_problem(config, [&](const auto& problem, const auto& y0) {
    std::decay_t<decltype(y0)> reference;
    try {
      reference = reference_solution(problem, y0, config.t0, config.t1);
    } catch (const Error& e) {
      return failed_sweep("convergence", kConvergenceColumns, step_sizes(config), std::string("reference: ") + e.what());
    }
    return convergence_table(plan, problem, y0, config.t0, config.t1, config.steps,
                             parse_advance(config.advance), reference, config.parallel);
  });
}

ResultTable run_work_precision(const ExperimentConfig& config) {
  config.validate();
  const StepPlan plan = plan_step(resolve_tableau(config.tableau));
  return with_problem(config, [&](const auto& problem, const auto& y0) {
    std::decay_t<decltype(y0)> reference;
    try {
      reference = reference_solution(problem, y0, config.t0, config.t1);
    } catch (const Error& e) {
      auto table = failed_sweep("work-precision", kWorkPrecisionColumns,
                                config.fixed ? step_sizes(config) : config.tols, std::string("reference: ") + e.what());
      if (config.fixed) table.notes.push_back("fixed-step sweep: the tol column holds the step size h");
      return table;
    }
    if (config.fixed) {
      return fixed_work_table(plan, problem, y0, config.t0, config.t1, config.steps,
                              parse_advance(config.advance), reference, config.parallel);
    }
    return work_precision_table(plan, problem, y0, config.t0, config.t1, config.tols,
                                controller_from(config), reference, config.parallel);
  });
}

ResultTable run_needle(const ExperimentConfig& config) {
  config.validate();
  const StepPlan plan = plan_step(resolve_tableau(config.tableau));
  return with_problem(config, [&](const auto& problem, const auto& y0) {
    return needle_table(plan, problem, y0, config.t0, config.t1, controller_from(config),
                        config.window_lo, config.window_hi);
  });
}

TableauCheck run_tableau_check(const ExperimentConfig& config) {
  return check_tableau(resolve_tableau(config.tableau));
}

}  // namespace cfree

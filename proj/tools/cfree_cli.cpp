// cfree: run commutator-free integrator experiments and check tableaux.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cfree/catalog.hpp"
#include "cfree/errors.hpp"
#include "cfree/experiments.hpp"

namespace {

struct Flags {
  cfree::ExperimentConfig cfg;
  std::string config_path;
  double atol = 0, rtol = 0, h0 = 0, hmax = 0;
  std::vector<std::string> params;
};

void add_common(CLI::App* cmd, Flags& f, bool sweep) {
  cmd->add_option("--config", f.config_path, "JSON experiment config; flags override it");
  cmd->add_option("--problem", f.cfg.problem, "rigid-body | van-der-pol | heavy-top");
  cmd->add_option("--tableau", f.cfg.tableau, "catalog name or JSON tableau file");
  cmd->add_option("--param", f.params, "problem parameter KEY=VALUE (repeatable)");
  cmd->add_option("--mu", [&f](const CLI::results_t& r) {
       f.params.push_back("mu=" + r.front());
       return true;
     }, "Van der Pol mu");
  cmd->add_option("--y0", f.cfg.y0, "initial state coordinates")->delimiter(',');
  cmd->add_option("--t0", f.cfg.t0, "start time");
  cmd->add_option("--t1", f.cfg.t1, "end time");
  cmd->add_option("--atol", f.atol, "absolute tolerance");
  cmd->add_option("--rtol", f.rtol, "relative tolerance (ignored on S^2 and se(3)*)");
  cmd->add_option("--h0", f.h0, "initial step size");
  cmd->add_option("--hmax", f.hmax, "largest step size");
  cmd->add_option("--seed", f.cfg.seed, "seed of the random rigid-body initial state");
  cmd->add_option("--out", f.cfg.out, "output file (default: standard output)");
  cmd->add_option("--format", f.cfg.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--steps", f.cfg.steps, "fixed step count (repeatable)");
  cmd->add_option("--advance", f.cfg.advance, "principal | embedded")
      ->check(CLI::IsMember({"principal", "embedded"}));
  if (sweep) {
    cmd->add_option("--tol", f.cfg.tols, "tolerance (repeatable)");
    cmd->add_flag("--fixed", f.cfg.fixed, "sweep --steps with fixed steps instead of --tol");
    cmd->add_flag("!--serial", f.cfg.parallel, "run sweep entries one at a time");
  }
}

/// Config file first, then explicitly given flags on top.
cfree::ExperimentConfig resolve(const CLI::App* cmd, Flags f, cfree::Mode mode) {
  cfree::ExperimentConfig cfg = f.cfg;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw cfree::InputError("cannot read config " + f.config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    cfg = cfree::config_from_json(buf.str());
    auto given = [cmd](const char* name) { return cmd->count(name) > 0; };
    if (given("--problem")) cfg.problem = f.cfg.problem;
    if (given("--tableau")) cfg.tableau = f.cfg.tableau;
    if (given("--y0")) cfg.y0 = f.cfg.y0;
    if (given("--t0")) cfg.t0 = f.cfg.t0;
    if (given("--t1")) cfg.t1 = f.cfg.t1;
    if (given("--seed")) cfg.seed = f.cfg.seed;
    if (given("--out")) cfg.out = f.cfg.out;
    if (given("--format")) cfg.format = f.cfg.format;
    if (given("--steps")) cfg.steps = f.cfg.steps;
    if (given("--advance")) cfg.advance = f.cfg.advance;
    if (cmd->get_option_no_throw("--tol") && given("--tol")) cfg.tols = f.cfg.tols;
    if (cmd->get_option_no_throw("--fixed") && given("--fixed")) cfg.fixed = f.cfg.fixed;
  }
  cfg.mode = mode;
  if (cmd->count("--atol")) cfg.atol = f.atol;
  if (cmd->count("--rtol")) cfg.rtol = f.rtol;
  if (cmd->count("--h0")) cfg.h0 = f.h0;
  if (cmd->count("--hmax")) cfg.hmax = f.hmax;
  for (const auto& kv : f.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw cfree::InputError("--param expects KEY=VALUE, got '" + kv + "'");
    try {
      cfg.params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    } catch (const std::exception&) {
      throw cfree::InputError("--param " + kv + ": value is not a number");
    }
  }
  return cfg;
}

void emit(const cfree::ExperimentConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.out);
  if (!out) throw cfree::InputError("cannot write " + cfg.out);
  out << text;
}

int emit_table(const cfree::ExperimentConfig& cfg, const cfree::ResultTable& table) {
  const std::string config_json = cfree::config_to_json(cfg);
  emit(cfg, cfg.format == "json" ? cfree::render_json(table, config_json)
                                 : cfree::render_csv(table, config_json));
  if (table.failed()) {
    std::cerr << "cfree: some sweep entries failed\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive commutator-free Lie group integrators"};
  app.require_subcommand(1);

  auto* tableaux = app.add_subcommand("tableaux", "list or check tableaux");
  tableaux->require_subcommand(1);
  auto* list = tableaux->add_subcommand("list", "list catalog tableaux");
  Flags check_flags;
  auto* check = tableaux->add_subcommand("check", "order conditions, reuse census and budget");
  check->add_option("tableau", check_flags.cfg.tableau, "catalog name or JSON file")->required();
  check->add_option("--format", check_flags.cfg.format, "text | json")->check(CLI::IsMember({"text", "json"}));
  check_flags.cfg.format = "text";

  Flags integrate_flags, convergence_flags, wp_flags, needle_flags;
  auto* integrate = app.add_subcommand("integrate", "one adaptive (or --steps fixed) run");
  add_common(integrate, integrate_flags, false);
  auto* convergence = app.add_subcommand("convergence", "fixed-step errors and observed orders");
  add_common(convergence, convergence_flags, false);
  auto* wp = app.add_subcommand("work-precision", "error and cost across tolerances");
  add_common(wp, wp_flags, true);
  auto* needle = app.add_subcommand("needle", "step-size sequence of one adaptive run");
  add_common(needle, needle_flags, false);

  convergence_flags.cfg.steps = {};
  needle_flags.cfg.problem = "van-der-pol";
  needle_flags.cfg.t1 = 15.0;
  needle_flags.cfg.tableau = "cf32a";

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      for (const auto& t : cfree::catalog()) {
        std::cout << t.name << "  s=" << t.stages << "  order " << t.order;
        if (t.is_pair()) std::cout << "(" << t.embedded_order << ")";
        std::cout << (t.fsal ? "  FSAL" : "") << '\n';
      }
      return 0;
    }
    if (check->parsed()) {
      const auto report = cfree::check_tableau(cfree::resolve_tableau(check_flags.cfg.tableau));
      std::cout << (check_flags.cfg.format == "json" ? report.render_json() : report.render_text());
      const int want = report.tableau.order;
      bool ok = report.principal.certified_order >= want;
      if (report.embedded) ok = ok && report.embedded->certified_order >= report.tableau.embedded_order;
      return ok ? 0 : 1;
    }
    if (integrate->parsed()) {
      const auto cfg = resolve(integrate, integrate_flags, cfree::Mode::Integrate);
      return emit_table(cfg, cfree::run_integrate(cfg));
    }
    if (convergence->parsed()) {
      auto cfg = resolve(convergence, convergence_flags, cfree::Mode::Convergence);
      if (cfg.steps.empty()) cfg.steps = {40, 80, 160, 320};
      return emit_table(cfg, cfree::run_convergence(cfg));
    }
    if (wp->parsed()) {
      const auto cfg = resolve(wp, wp_flags, cfree::Mode::WorkPrecision);
      return emit_table(cfg, cfree::run_work_precision(cfg));
    }
    if (needle->parsed()) {
      auto cfg = resolve(needle, needle_flags, cfree::Mode::Needle);
      if (!cfg.atol) cfg.atol = 1e-3;
      return emit_table(cfg, cfree::run_needle(cfg));
    }
  } catch (const cfree::Error& e) {
    std::cerr << "cfree: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

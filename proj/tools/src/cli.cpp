#include "parisian_cli/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "parisian/errors.hpp"
#include "parisian/parisian_control.hpp"
#include "parisian/scale_functions.hpp"
#include "parisian/simulator.hpp"
#include "parisian/verification.hpp"
#include "parisian_cli/config.hpp"

namespace parisian::cli {

using nlohmann::json;

namespace {

// Shortest text that round-trips to the same double.
std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Globals {
  std::string config_path;
  std::string out_path;
  bool json = false;
};

ThresholdRule parse_rule(const std::string& name) {
  if (name == "minimize" || name == "minimize_h") return ThresholdRule::minimize_h;
  if (name == "theorem" || name == "theorem_cases") return ThresholdRule::theorem_cases;
  throw ConfigError("unknown --rule '" + name + "' (expected minimize or theorem)");
}

// CSV with a '#' metadata header echoing the resolved config.
class CsvSink {
 public:
  CsvSink(const Globals& g, std::ostream& fallback, const std::string& command,
          const RunConfig& config, const json& extra = json::object()) {
    if (!g.out_path.empty()) {
      file_.open(g.out_path);
      if (!file_) throw std::runtime_error("cannot write '" + g.out_path + "'");
      os_ = &file_;
    } else {
      os_ = &fallback;
    }
    *os_ << "# parisian " << version() << "\n";
    *os_ << "# command: " << command << "\n";
    *os_ << "# config: " << to_json(config).dump() << "\n";
    if (!extra.empty()) *os_ << "# run: " << extra.dump() << "\n";
  }

  void header(const std::vector<std::string>& cols) { row_strings(cols); }

  void row(const std::vector<double>& values) {
    std::vector<std::string> s;
    s.reserve(values.size());
    for (double v : values) s.push_back(fmt(v));
    row_strings(s);
  }

  void row_strings(const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) *os_ << (i ? "," : "") << cols[i];
    *os_ << "\n";
  }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

std::vector<double> grid_points(const GridSpec& g) {
  std::vector<double> xs(g.n_points);
  const double h = (g.x_max - g.x_min) / static_cast<double>(g.n_points - 1);
  for (std::size_t i = 0; i < g.n_points; ++i) xs[i] = g.x_min + h * static_cast<double>(i);
  xs.back() = g.x_max;
  return xs;
}

json solution_json(const ThresholdSolution& s, double c_star) {
  return {{"b_star", s.b_star},
          {"p_min", s.p_min},
          {"condition", s.condition_holds},
          {"general_condition", s.general_condition},
          {"h_at_b_star", s.h_at_b_star},
          {"branch", to_string(s.branch)},
          {"rule", to_string(s.rule)},
          {"rules_agree", s.rules_agree},
          {"at_p_min", s.at_p_min},
          {"c_star", c_star}};
}

json estimate_json(const SimEstimate& e) {
  return {{"estimate", e.mean},
          {"std_error", e.std_error},
          {"ci95", {e.ci95.first, e.ci95.second}},
          {"n_paths", e.n_paths},
          {"seed", e.seed},
          {"horizon", e.horizon},
          {"truncation_bias_bound", e.truncation_bias_bound}};
}

json report_json(const ResidualReport& r, bool with_grid) {
  json j = {{"name", r.name},
            {"pass", r.pass},
            {"skipped", r.skipped},
            {"one_sided", r.one_sided},
            {"tolerance", r.tolerance},
            {"max", r.max_abs},
            {"worst_x", r.worst_x},
            {"max_quadrature_error", r.max_quadrature_error},
            {"points", r.grid.size()}};
  if (!r.note.empty()) j["note"] = r.note;
  if (with_grid) {
    j["grid"] = r.grid;
    j["residuals"] = r.residuals;
  }
  return j;
}

int cmd_solve(const Globals& g, const RunConfig& cfg, const std::string& rule_name,
              std::ostream& out) {
  const ParisianProblem problem(cfg.model, cfg.params);
  const ThresholdSolution sol = problem.solve_b_star(parse_rule(rule_name));
  const ValueFunction v = problem.value_function(sol);
  json result = solution_json(sol, problem.scales().c_star());
  result["version"] = version();
  result["config"] = to_json(cfg);
  if (!g.out_path.empty()) {
    CsvSink csv(g, out, "solve", cfg, {{"rule", to_string(sol.rule)}});
    csv.header({"x", "V", "Vprime"});
    for (double x : grid_points(cfg.grid)) csv.row({x, v.value(x), v.first(x)});
    result["csv"] = g.out_path;
  }
  out << result.dump(2) << "\n";
  return kOk;
}

struct SimulateArgs {
  std::optional<std::size_t> paths;
  std::optional<std::uint64_t> seed;
  std::optional<double> horizon;
  std::optional<double> step;
  double x = 1.0;
  std::optional<double> b;
  std::string identity;
  std::string clock = "excursion";
  unsigned threads = 1;
  std::string rule = "minimize";
};

int cmd_simulate(const RunConfig& cfg, const SimulateArgs& a, std::ostream& out) {
  SimConfig sc;
  sc.n_paths = a.paths.value_or(cfg.sim.paths);
  sc.seed = a.seed.value_or(cfg.sim.seed);
  sc.time_horizon = a.horizon ? *a.horizon : cfg.sim.horizon.value_or(0.0);
  if (!cfg.model.bounded_variation()) sc.euler_step = a.step ? *a.step : cfg.sim.step.value_or(1e-3);
  sc.start_x = a.x;
  sc.threads = a.threads;
  if (a.clock == "excursion") {
    sc.clock = ParisianClock::per_excursion;
  } else if (a.clock == "inspection") {
    sc.clock = ParisianClock::poisson_inspection;
  } else {
    throw ConfigError("unknown --clock '" + a.clock + "' (expected excursion or inspection)");
  }
  if (sc.n_paths == 0) throw ConfigError("--paths must be positive");

  json result;
  result["version"] = version();
  result["config"] = to_json(cfg);
  result["x"] = a.x;
  result["clock"] = a.clock;
  if (!a.identity.empty()) {
    const auto which = identity_from_string(a.identity);
    if (!which) throw ConfigError("unknown --identity '" + a.identity + "'");
    sc.level_b = a.b.value_or(0.0);
    if (*which != Identity::down_ever && !a.b) throw ConfigError("--identity " + a.identity + " needs --b");
    const IdentityEstimate est = estimate_identity(cfg.model, cfg.params, sc, *which);
    result["quantity"] = a.identity;
    result["b"] = sc.level_b;
    result.update(estimate_json(est.estimate));
    result["analytic"] = est.analytic;
    result["z_score"] = est.z_score;
  } else {
    const ParisianProblem problem(cfg.model, cfg.params);
    double b = 0.0;
    if (a.b) {
      b = *a.b;
    } else {
      b = problem.solve_b_star(parse_rule(a.rule)).b_star;
    }
    if (!(b >= 0.0)) throw ConfigError("--b must be >= 0");
    sc.level_b = b;
    const SimEstimate est = simulate_value(cfg.model, cfg.params, sc);
    const double analytic = problem.performance_general_b(b).value(a.x);
    result["quantity"] = "value";
    result["b"] = b;
    result.update(estimate_json(est));
    result["analytic"] = analytic;
    result["z_score"] = est.z_score(analytic);
  }
  out << result.dump(2) << "\n";
  return kOk;
}

struct VerifyArgs {
  std::string rule = "minimize";
  std::optional<double> b;
  double h_scale = 1.0;
  std::size_t points = 400;
};

int cmd_verify(const Globals& g, const RunConfig& cfg, const VerifyArgs& a, std::ostream& out) {
  const ParisianProblem problem(cfg.model, cfg.params);
  const ThresholdSolution sol = problem.solve_b_star(parse_rule(a.rule));
  const double b = a.b.value_or(sol.b_star);
  if (!(b >= 0.0)) throw ConfigError("--b must be >= 0");
  if (!(a.h_scale > 0.0)) throw ConfigError("--h-scale must be positive");
  const ValueFunction v(problem.scales(), b, a.h_scale * problem.h_p(b));

  VerificationOptions opt;
  opt.points_per_region = a.points;
  std::vector<ResidualReport> reports = check_generator_identities(cfg.model, cfg.params, v, opt);
  reports.push_back(check_hjb(cfg.model, cfg.params, v, opt));
  for (auto& r : check_concavity_and_smoothness(cfg.model, cfg.params, v, opt)) {
    reports.push_back(std::move(r));
  }
  const bool ok = all_pass(reports);

  if (g.json) {
    json j;
    j["version"] = version();
    j["config"] = to_json(cfg);
    j["solution"] = solution_json(sol, problem.scales().c_star());
    j["b"] = b;
    j["h_scale"] = a.h_scale;
    j["pass"] = ok;
    j["reports"] = json::array();
    for (const auto& r : reports) j["reports"].push_back(report_json(r, true));
    out << j.dump(2) << "\n";
  } else {
    char line[256];
    std::snprintf(line, sizeof line, "b = %.12g  (b* = %.12g, rule %s)\n", b, sol.b_star,
                  to_string(sol.rule));
    out << line;
    for (const auto& r : reports) {
      const char* status = r.skipped ? "SKIP" : (r.pass ? "PASS" : "FAIL");
      std::snprintf(line, sizeof line, "%-4s  %-32s  max %-12.4g tol %-10.3g", status,
                    r.name.c_str(), r.max_abs, r.tolerance);
      out << line;
      if (!r.note.empty()) out << "  (" << r.note << ")";
      out << "\n";
    }
    out << (ok ? "all checks passed" : "some checks failed") << "\n";
  }
  return ok ? kOk : kCheckFailure;
}

struct SweepArgs {
  std::string param = "p";
  double from = 0.0;
  double to = 0.0;
  std::size_t steps = 50;
  std::string rule = "minimize";
};

int cmd_sweep(const Globals& g, const RunConfig& cfg, const SweepArgs& a, std::ostream& out) {
  if (a.param != "p" && a.param != "K" && a.param != "q") {
    throw ConfigError("--param must be one of p, K, q");
  }
  if (a.steps < 1) throw ConfigError("--steps must be >= 1");
  if (!(a.from > 0.0) || !(a.to >= a.from)) throw ConfigError("sweep range must satisfy 0 < from <= to");
  const ThresholdRule rule = parse_rule(a.rule);

  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < a.steps; ++i) {
    const double t = a.steps == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(a.steps - 1);
    const double value = i + 1 == a.steps ? a.to : a.from + t * (a.to - a.from);
    ControlParams params = cfg.params;
    (a.param == "p" ? params.p : a.param == "K" ? params.K : params.q) = value;
    try {
      params.validate(cfg.model);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("sweep value ") + fmt(value) + ": " + e.what());
    }
    const ParisianProblem problem(cfg.model, params);
    const ThresholdSolution s = problem.solve_b_star(rule);
    rows.push_back({value, s.p_min, s.condition_holds ? 1.0 : 0.0, s.b_star,
                    s.general_condition ? 1.0 : 0.0});
  }

  const std::vector<std::string> cols{a.param, "p_min", "condition", "b_star", "general_condition"};
  if (g.json && g.out_path.empty()) {
    json j = json::array();
    for (const auto& r : rows) {
      j.push_back({{a.param, r[0]},
                   {"p_min", r[1]},
                   {"condition", r[2] != 0.0},
                   {"b_star", r[3]},
                   {"general_condition", r[4] != 0.0}});
    }
    out << j.dump(2) << "\n";
    return kOk;
  }
  CsvSink csv(g, out, "sweep", cfg,
              {{"param", a.param}, {"from", a.from}, {"to", a.to}, {"steps", a.steps},
               {"rule", to_string(rule)}});
  csv.header(cols);
  for (const auto& r : rows) {
    csv.row_strings({fmt(r[0]), fmt(r[1]), r[2] != 0.0 ? "1" : "0", fmt(r[3]),
                     r[4] != 0.0 ? "1" : "0"});
  }
  return kOk;
}

int cmd_dump_scale(const Globals& g, const RunConfig& cfg, std::ostream& out) {
  const ScaleSet s(cfg.model, cfg.params.q, cfg.params.p, cfg.params.K);
  const auto xs = grid_points(cfg.grid);
  if (g.json && g.out_path.empty()) {
    json j = json::array();
    for (double x : xs) {
      j.push_back({{"x", x},
                   {"W", s.W(x)},
                   {"Wprime", s.W_prime(x)},
                   {"Z", s.Z(x)},
                   {"Zqp", s.Zqp(x)},
                   {"Zqp_prime", s.Zqp_prime(x)}});
    }
    out << j.dump(2) << "\n";
    return kOk;
  }
  CsvSink csv(g, out, "dump-scale", cfg);
  csv.header({"x", "W", "Wprime", "Z", "Zqp", "Zqp_prime"});
  for (double x : xs) csv.row({x, s.W(x), s.W_prime(x), s.Z(x), s.Zqp(x), s.Zqp_prime(x)});
  return kOk;
}

}  // namespace

const char* version() { return PARISIAN_VERSION; }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal refraction dividends under Parisian ruin", "parisian"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", version());

  Globals g;
  app.add_option("--config", g.config_path, "JSON model/control config")->check(CLI::ExistingFile);
  app.add_option("--out", g.out_path, "write CSV output to this path");
  app.add_flag("--json", g.json, "emit JSON instead of tables");

  std::string solve_rule = "minimize";
  auto* solve = app.add_subcommand("solve", "optimal threshold and value function");
  solve->add_option("--rule", solve_rule, "threshold rule: minimize or theorem");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate against the closed form");
  simulate->add_option("--paths", sim.paths);
  simulate->add_option("--seed", sim.seed);
  simulate->add_option("--horizon", sim.horizon);
  simulate->add_option("--step", sim.step, "Euler step (models with sigma > 0)");
  simulate->add_option("--x", sim.x, "start point");
  simulate->add_option("--b", sim.b, "refraction or upper level (default b*)");
  simulate->add_option("--identity", sim.identity,
                       "up_classical, up_parisian, down_before_up or down_ever");
  simulate->add_option("--clock", sim.clock, "excursion or inspection");
  simulate->add_option("--threads", sim.threads);
  simulate->add_option("--rule", sim.rule);

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "numerical optimality certificate");
  verify->add_option("--rule", ver.rule);
  verify->add_option("--b", ver.b, "verify V_b at this level instead of b*");
  verify->add_option("--h-scale", ver.h_scale, "multiply the normaliser (negative control)");
  verify->add_option("--points", ver.points, "grid points per region");

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "threshold over a parameter range");
  sweep->add_option("--param", sw.param, "p, K or q");
  sweep->add_option("--from", sw.from)->required();
  sweep->add_option("--to", sw.to)->required();
  sweep->add_option("--steps", sw.steps);
  sweep->add_option("--rule", sw.rule);

  auto* dump = app.add_subcommand("dump-scale", "scale functions on the config grid");

  try {
    std::vector<std::string> rev(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(rev.begin(), rev.end());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (g.config_path.empty()) throw ConfigError("--config is required");
    const RunConfig cfg = load_config(g.config_path);
    if (solve->parsed()) return cmd_solve(g, cfg, solve_rule, out);
    if (simulate->parsed()) return cmd_simulate(cfg, sim, out);
    if (verify->parsed()) return cmd_verify(g, cfg, ver, out);
    if (sweep->parsed()) return cmd_sweep(g, cfg, sw, out);
    if (dump->parsed()) return cmd_dump_scale(g, cfg, out);
  } catch (const std::invalid_argument& e) {
    // ConfigError, AdmissibilityError, UnsupportedModelError
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kCheckFailure;
  }
  return kConfigError;
}

}  // namespace parisian::cli

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "parisian/parisian_control.hpp"
#include "parisian/scale_functions.hpp"
#include "parisian/simulator.hpp"
#include "parisian/verification.hpp"

using namespace parisian;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

const ControlParams kZeroSet{0.1, 0.5, 0.5};
const ControlParams kPositiveSet{0.1, 20.0, 1.4};
constexpr std::uint64_t kBaseSeed = 42;

Outcome transform_round_trip() {
  Outcome o;
  double worst = 0.0;
  for (const auto& m : {oracle::m1(), oracle::m3()}) {
    for (double q : {0.1, 1.0}) {
      const ExpSum w = build_w(m, q);
      const double f = phi(m, q);
      for (double theta : {f + 0.5, f + 1.0, f + 2.0}) {
        const double lt = oracle::integrate_to_inf([&](double y) { return std::exp(-theta * y) * w(y); }, 0.0, 20.0);
        const double exact = 1.0 / (m.psi(theta) - q);
        worst = std::max(worst, std::abs(lt / exact - 1.0));
      }
    }
  }
  o.pass = worst <= 1e-8;
  o.detail = fmt("max rel err %.2e", worst);
  return o;
}

Outcome h_zero_closed_form() {
  const ParisianProblem pr(oracle::m1(), kZeroSet);
  const double closed = pr.h_p_zero_closed_form();
  // Quadrature of the definition with Z' itself from quadrature of its integral form.
  const double F = phi(oracle::m1(), 0.6);
  const double fk = phi(refract(oracle::m1(), 0.5), 0.1);
  auto z_prime = [&](double x) {
    return 0.5 * oracle::integrate_to_inf(
                     [&](double y) { return std::exp(-F * y) * oracle::w_cp_prime(1.5, 1.0, 1.0, 0.1, x + y); }, 0.0, 5.0);
  };
  const double quad = fk * oracle::integrate_to_inf([&](double y) { return std::exp(-fk * y) * z_prime(y); }, 0.0, 5.0);
  Outcome o;
  o.pass = std::abs(closed - quad) <= 1e-10 && std::abs(closed - 0.4161250) < 5e-8;
  o.detail = fmt("closed %.10f", closed) + fmt(" |closed-quad| %.2e", std::abs(closed - quad));
  return o;
}

Outcome threshold_consistency() {
  const ParisianProblem pr(oracle::m1(), kPositiveSet);
  const auto s = pr.solve_b_star();
  const double c = pr.scales().c_star();
  Outcome o;
  const double diff = std::abs(s.b_root - s.b_minimizer);
  o.pass = s.b_star > 0.0 && diff <= 1e-8 && s.b_star >= 0.0 && s.b_star <= c;
  o.detail = fmt("b* %.10f", s.b_star) + fmt(" |root-argmin| %.2e", diff) + fmt(" c* %.6f", c);
  return o;
}

Outcome case_boundaries() {
  Outcome o;
  const auto m1 = oracle::m1();
  const double p_min = ParisianProblem(m1, kZeroSet).p_min();
  // M1/K=0.5: b* = 0 for p <= p_min and wherever the condition fails, under both rules.
  int zero_checks = 0;
  for (double p : {0.02, 0.1, 0.15, p_min, 0.3, 0.5, 2.0, 10.0, 100.0}) {
    const ParisianProblem pr(m1, {0.1, p, 0.5});
    for (auto rule : {ThresholdRule::minimize_h, ThresholdRule::theorem_cases}) {
      const auto s = pr.solve_b_star(rule);
      if ((p <= p_min || !s.condition_holds) && s.b_star != 0.0) o.pass = false;
      ++zero_checks;
    }
  }
  // 50-point sweep on M1/K=1.4 under the stated case ordering: one transition,
  // at p_min, with b* > 0 exactly where the condition holds.
  const double p_min_b = ParisianProblem(m1, kPositiveSet).p_min();
  int transitions = 0, transitions_min = 0;
  bool prev = false, prev_min = false;
  for (int i = 0; i < 50; ++i) {
    const double p = 0.05 + (30.0 - 0.05) * i / 49.0;
    const ParisianProblem pr(m1, {0.1, p, 1.4});
    const auto s = pr.solve_b_star(ThresholdRule::theorem_cases);
    const bool pos = s.b_star > 0.0;
    if (p <= p_min_b && pos) o.pass = false;
    if (p > p_min_b && pos != s.condition_holds) o.pass = false;
    if (i > 0 && pos != prev) ++transitions;
    prev = pos;
    // Default rule: b* > 0 exactly where h_p(0) < Z'(0).
    const auto sm = pr.solve_b_star(ThresholdRule::minimize_h);
    const bool pos_min = sm.b_star > 0.0;
    if (pos_min != sm.general_condition) o.pass = false;
    if (i > 0 && pos_min != prev_min) ++transitions_min;
    prev_min = pos_min;
  }
  if (transitions != 1 || transitions_min != 1) o.pass = false;
  o.detail = "K=0.5 zero-threshold checks " + std::to_string(zero_checks) +
             "; K=1.4 sweep transitions " + std::to_string(transitions) + " (theorem rule), " +
             std::to_string(transitions_min) + " (minimize rule)";
  return o;
}

Outcome monte_carlo_values() {
  Outcome o;
  const auto m1 = oracle::m1();
  struct Case {
    ControlParams cp;
    double x, b;
  };
  const double b_star = ParisianProblem(m1, kPositiveSet).solve_b_star().b_star;
  const std::vector<Case> cases{
      {kZeroSet, 0.0, 0.0},       {kZeroSet, 1.0, 0.0},       {kZeroSet, 3.0, 0.0},
      {kZeroSet, 1.0, 1.0},       {kZeroSet, 2.0, 0.5},       {kPositiveSet, 0.0, b_star},
      {kPositiveSet, 1.0, b_star}, {kPositiveSet, 3.0, b_star}, {kPositiveSet, 1.0, 0.0},
      {kPositiveSet, 2.0, 1.0}};
  int covered = 0;
  double worst_rel = 0.0, worst_z = 0.0;
  std::uint64_t seed = kBaseSeed;
  for (const auto& c : cases) {
    SimConfig cfg;
    cfg.n_paths = 100000;
    cfg.seed = seed++;
    cfg.start_x = c.x;
    cfg.level_b = c.b;
    const auto est = simulate_value(m1, c.cp, cfg);
    const double analytic = ParisianProblem(m1, c.cp).performance_general_b(c.b)(c.x);
    const double rel = std::abs(est.mean / analytic - 1.0);
    worst_rel = std::max(worst_rel, rel);
    worst_z = std::max(worst_z, std::abs(est.z_score(analytic)));
    if (est.covers(analytic) && rel < 0.01) ++covered;
  }
  o.pass = covered == static_cast<int>(cases.size());
  o.detail = std::to_string(covered) + "/" + std::to_string(cases.size()) + " pairs in 95% CI and 1%" +
             fmt("; max rel %.2e", worst_rel) + fmt(" max |z| %.2f", worst_z);
  return o;
}

Outcome fluctuation_identities() {
  Outcome o;
  const auto m1 = oracle::m1();
  std::uint64_t seed = kBaseSeed + 100;
  std::string zs;
  for (auto id : {Identity::up_classical, Identity::up_parisian, Identity::down_before_up, Identity::down_ever}) {
    SimConfig cfg;
    cfg.n_paths = 100000;
    cfg.seed = seed++;
    cfg.start_x = 0.5;
    cfg.level_b = 2.0;
    const auto e = estimate_identity(m1, kZeroSet, cfg, id);
    if (!e.estimate.covers(e.analytic) || !(std::abs(e.z_score) < 3.0)) o.pass = false;
    zs += std::string(zs.empty() ? "" : ", ") + to_string(id) + fmt(" z=%.2f", e.z_score);
  }
  o.detail = zs;
  return o;
}

Outcome appendix_identity() {
  SimConfig cfg;
  cfg.n_paths = 100000;
  cfg.seed = kBaseSeed + 200;
  const auto r = verify_appendix_identity(oracle::m1(), kZeroSet, cfg, 1.0, 2.0);
  const double sub = std::abs(r.second_term_quadrature - r.second_term_closed);
  Outcome o;
  o.pass = r.lhs.covers(r.rhs_symbolic) && sub <= 1e-10 && std::abs(r.rhs_quadrature - r.rhs_symbolic) <= 1e-8;
  o.detail = fmt("LHS %.5f", r.lhs.mean) + fmt(" +- %.5f", 1.96 * r.lhs.std_error) +
             fmt(" RHS %.6f", r.rhs_symbolic) + fmt(" z=%.2f", r.z_score) + fmt("; sub-identity %.1e", sub) +
             fmt("; RHS symbolic vs quadrature %.1e", std::abs(r.rhs_quadrature - r.rhs_symbolic));
  return o;
}

Outcome optimality_structure() {
  Outcome o;
  const auto m1 = oracle::m1();
  double worst_gen = 0.0, worst_hjb = -1e300, worst_conc = -1e300, worst_slope = 0.0;
  bool controls_fail = true;
  for (const auto& cp : {kZeroSet, kPositiveSet}) {
    const ParisianProblem pr(m1, cp);
    const auto s = pr.solve_b_star();
    const auto v = pr.value_function(s);
    const double scale = cp.K / cp.q;
    for (const auto& r : check_generator_identities(m1, cp, v)) {
      if (r.skipped) continue;
      if (!r.pass || r.grid.size() != 400) o.pass = false;
      worst_gen = std::max(worst_gen, r.max_abs / scale);
    }
    const auto hjb = check_hjb(m1, cp, v);
    if (!hjb.pass) o.pass = false;
    worst_hjb = std::max(worst_hjb, hjb.max_abs / scale);
    for (const auto& r : check_concavity_and_smoothness(m1, cp, v)) {
      if (r.name.rfind("concavity", 0) == 0) {
        if (!r.pass) o.pass = false;
        worst_conc = std::max(worst_conc, r.max_abs);
      }
      if (r.name == "V'(b*) = 1" && !r.skipped) {
        if (!r.pass) o.pass = false;
        worst_slope = std::max(worst_slope, r.max_abs);
      }
    }
    // Negative control: level shifted by +0.5.
    const auto bad = pr.performance_general_b(s.b_star + 0.5);
    auto reports = check_generator_identities(m1, cp, bad);
    reports.push_back(check_hjb(m1, cp, bad));
    for (auto& r : check_concavity_and_smoothness(m1, cp, bad)) reports.push_back(r);
    if (all_pass(reports)) controls_fail = false;
  }
  if (!controls_fail) o.pass = false;
  o.detail = fmt("gen max %.1e", worst_gen) + fmt(" HJB max %.1e", worst_hjb) + " (x K/q)" +
             fmt("; max V'' %.1e", worst_conc) + fmt("; |V'(b*)-1| %.1e", worst_slope) +
             "; shifted-b control " + (controls_fail ? "fails" : "PASSES (bad)");
  return o;
}

Outcome domination() {
  Outcome o;
  const ParisianProblem pr(oracle::m1(), kPositiveSet);
  const double bs = pr.solve_b_star().b_star;
  const auto best = pr.value_function(pr.solve_b_star());
  double worst = 1e300;
  for (double b : {0.0, bs / 2.0, 2.0 * bs, bs + 1.0}) {
    const auto vb = pr.performance_general_b(b);
    for (int i = 0; i <= 1100; ++i) {
      const double x = -5.0 + 0.05 * i;
      worst = std::min(worst, best(x) - vb(x));
    }
  }
  o.pass = worst >= -1e-9;
  o.detail = fmt("min (V_b* - V_b) %.2e", worst) + fmt(" at b* %.6f", bs);
  return o;
}

Outcome limit_consistency() {
  Outcome o;
  const auto m1 = oracle::m1();
  const double w0p = (0.1 + 1.0) / (1.5 * 1.5);
  double worst = 0.0;
  for (double K : {0.5, 1.4}) {
    const ParisianProblem pr(m1, {0.1, 1e6, K});
    worst = std::max(worst, std::abs(pr.condition_lhs() - w0p));
    const bool classical = w0p > pr.scales().phi_K() * (1.0 / K - w_at_zero(m1));
    if (pr.positivity_condition() != classical) o.pass = false;
  }
  if (worst > 1e-3) o.pass = false;
  // K -> infinity: h_p(0) < Z'(0) iff Z''(0) < 0 (needs a Gaussian part for Z'' at 0).
  int agree = 0, concave = 0;
  const std::vector<LevyModel> models{oracle::m3(), LevyModel::with_diffusion(1.0, 2.0, {{1.0, 1.0}})};
  for (const auto& m : models) {
    const ParisianProblem pr(m, {0.1, 0.5, 1e6});
    const bool neg = pr.scales().Zqp_second(0.0) < 0.0;
    concave += neg;
    agree += pr.general_condition() == neg;
  }
  if (agree != static_cast<int>(models.size()) || concave == 0 || concave == static_cast<int>(models.size())) {
    o.pass = false;
  }
  o.detail = fmt("p=1e6 |LHS - W'(0+)| %.2e", worst) + "; K=1e6 sign agreement " + std::to_string(agree) + "/" +
             std::to_string(models.size()) + " (both signs of Z''(0) covered)";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
    double time_limit;  // seconds, <= 0 for none
  };
  const std::vector<Criterion> criteria{
      {"scale-function transform round trip", transform_round_trip, 1.0},
      {"h_p(0) closed form vs quadrature", h_zero_closed_form, 1.0},
      {"threshold root vs minimiser", threshold_consistency, 1.0},
      {"case boundaries and sweep", case_boundaries, 0.0},
      {"Monte Carlo value agreement", monte_carlo_values, 120.0},
      {"fluctuation identities", fluctuation_identities, 0.0},
      {"appendix identity", appendix_identity, 0.0},
      {"optimality structure", optimality_structure, 0.0},
      {"domination", domination, 0.0},
      {"limit consistency", limit_consistency, 0.0},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (criteria[i].time_limit > 0.0 && secs > criteria[i].time_limit) {
      o.pass = false;
      o.detail += fmt("; over time limit %.0f s", criteria[i].time_limit);
    }
    failures += !o.pass;
    std::printf("%s  %2zu  %-38s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}

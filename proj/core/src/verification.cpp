#include "parisian/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "parisian/errors.hpp"

namespace parisian {

namespace {

std::vector<double> interior_grid(double lo, double hi, std::size_t n) {
  std::vector<double> g;
  g.reserve(n);
  const double h = (hi - lo) / static_cast<double>(n + 1);
  for (std::size_t i = 1; i <= n; ++i) g.push_back(lo + h * static_cast<double>(i));
  return g;
}

void finish(ResidualReport& r) {
  r.max_abs = 0.0;
  r.pass = true;
  for (std::size_t i = 0; i < r.residuals.size(); ++i) {
    double m = r.one_sided ? r.residuals[i] : std::abs(r.residuals[i]);
    if (std::isnan(m)) m = std::numeric_limits<double>::infinity();
    if (i == 0 || m > r.max_abs) {
      r.max_abs = m;
      r.worst_x = r.grid[i];
    }
  }
  r.pass = r.residuals.empty() || r.max_abs <= r.tolerance;
}

ResidualReport skipped(std::string name, std::string note) {
  ResidualReport r;
  r.name = std::move(name);
  r.skipped = true;
  r.pass = true;
  r.note = std::move(note);
  return r;
}

ResidualReport point_check(std::string name, double x, double residual, double tol) {
  ResidualReport r;
  r.name = std::move(name);
  r.grid = {x};
  r.residuals = {residual};
  r.tolerance = tol;
  finish(r);
  return r;
}

}  // namespace

Evaluable as_evaluable(const ValueFunction& v) {
  return Evaluable{[v](double x) { return v.value(x); }, [v](double x) { return v.first(x); },
                   [v](double x) { return v.second(x); }, v.kinks()};
}

GeneratorResult generator_apply(const LevyModel& model, const Evaluable& g, double x) {
  GeneratorResult out;
  out.value = model.drift() * g.first(x);
  if (model.sigma() > 0.0) out.value += 0.5 * model.sigma() * model.sigma() * g.second(x);
  if (model.jumps().empty()) return out;

  // Breakpoints in the jump-size variable z where x - z crosses a kink.
  std::vector<double> cuts{0.0};
  for (double k : g.kinks) {
    if (k < x) cuts.push_back(x - k);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const double gx = g.value(x);
  try {
    for (const auto& j : model.jumps()) {
      const double a = j.decay;
      auto f = [&](double z) { return g.value(x - z) * std::exp(-a * z); };
      double integral = 0.0;
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double err = 0.0;
        integral += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            f, cuts[i], cuts[i + 1], 15, 1e-14, &err);
        out.error_estimate += j.rate * a * err;
      }
      boost::math::quadrature::exp_sinh<double> tail;
      double err = 0.0;
      integral += tail.integrate(f, cuts.back(), std::numeric_limits<double>::infinity(), 1e-14,
                                 &err);
      out.error_estimate += j.rate * a * err;
      out.value += j.rate * (a * integral - gx);
    }
  } catch (const std::exception&) {
    // Quadrature gave up (non-finite integrand); surfaces as a failed residual.
    out.value = std::numeric_limits<double>::quiet_NaN();
    out.error_estimate = std::numeric_limits<double>::infinity();
  }
  return out;
}

std::vector<ResidualReport> check_generator_identities(const LevyModel& model,
                                                       const ControlParams& params,
                                                       const ValueFunction& v,
                                                       const VerificationOptions& opt) {
  const Evaluable g = as_evaluable(v);
  const double b = v.threshold();
  const double tol = 1e-6 * params.K / params.q;
  std::vector<ResidualReport> out;

  auto region = [&](std::string name, double lo, double hi, auto residual) {
    ResidualReport r;
    r.name = std::move(name);
    r.tolerance = tol;
    r.grid = interior_grid(lo, hi, opt.points_per_region);
    for (double x : r.grid) {
      const GeneratorResult gr = generator_apply(model, g, x);
      r.max_quadrature_error = std::max(r.max_quadrature_error, gr.error_estimate);
      r.residuals.push_back(residual(x, gr.value));
    }
    finish(r);
    if (r.max_quadrature_error > tol) {
      r.note = "quadrature error estimate " + std::to_string(r.max_quadrature_error) +
               " exceeds tolerance";
    }
    out.push_back(std::move(r));
  };

  region("(Gamma-q-p)V on x<0", -opt.region_width, 0.0,
         [&](double x, double gv) { return gv - (params.q + params.p) * g.value(x); });
  if (b > 0.0) {
    region("(Gamma-q)V on 0<x<b*", 0.0, b,
           [&](double x, double gv) { return gv - params.q * g.value(x); });
  } else {
    out.push_back(skipped("(Gamma-q)V on 0<x<b*", "b* = 0, region empty"));
  }
  region("(Gamma-q)V+K(1-V') on x>b*", b, b + opt.region_width, [&](double x, double gv) {
    return gv - params.q * g.value(x) + params.K * (1.0 - g.first(x));
  });
  return out;
}

ResidualReport check_hjb(const LevyModel& model, const ControlParams& params,
                         const ValueFunction& v, const VerificationOptions& opt) {
  const Evaluable g = as_evaluable(v);
  const double b = v.threshold();
  ResidualReport r;
  r.name = "HJB";
  r.one_sided = true;
  r.tolerance = 1e-6 * params.K / params.q;
  const double w = opt.region_width;
  std::vector<double> grid = interior_grid(-w, 0.0, opt.points_per_region);
  if (b > 0.0) {
    const auto mid = interior_grid(0.0, b, opt.points_per_region);
    grid.insert(grid.end(), mid.begin(), mid.end());
  }
  const auto up = interior_grid(b, b + w, opt.points_per_region);
  grid.insert(grid.end(), up.begin(), up.end());
  const auto far = interior_grid(b + w, std::max(b + w, opt.concavity_upper), 100);
  grid.insert(grid.end(), far.begin(), far.end());
  grid.push_back(0.0);
  if (b > 0.0) grid.push_back(b);

  for (double x : grid) {
    const GeneratorResult gr = generator_apply(model, g, x);
    r.max_quadrature_error = std::max(r.max_quadrature_error, gr.error_estimate);
    double res = gr.value - (params.q + (x < 0.0 ? params.p : 0.0)) * g.value(x);
    if (x >= 0.0) res += params.K * std::max(0.0, 1.0 - g.first(x));
    r.grid.push_back(x);
    r.residuals.push_back(res);
  }
  finish(r);
  return r;
}

std::vector<ResidualReport> check_concavity_and_smoothness(const LevyModel& model,
                                                           const ControlParams& params,
                                                           const ValueFunction& v,
                                                           const VerificationOptions& opt) {
  const double b = v.threshold();
  const bool diffusive = !model.bounded_variation();
  const double tol = opt.smoothness_tolerance;
  std::vector<ResidualReport> out;

  ResidualReport conc;
  conc.name = "concavity V''<=0 on (0,50)";
  conc.one_sided = true;
  conc.tolerance = opt.concavity_tolerance;
  conc.grid = interior_grid(0.0, opt.concavity_upper, 2000);
  for (double x : conc.grid) conc.residuals.push_back(v.second(x));
  finish(conc);
  out.push_back(std::move(conc));

  if (b > 0.0) {
    out.push_back(point_check("V'(b*) = 1", b, v.first(b) - 1.0, tol));
    out.push_back(point_check("V' continuous at b*", b, v.first(b) - v.first_left(b), tol));
    if (diffusive) {
      out.push_back(
          point_check("V'' continuous at b*", b, v.second(b) - v.second_left(b), 1e-6));
    }
  } else {
    out.push_back(skipped("V'(b*) = 1", "b* = 0"));
    out.push_back(skipped("V' continuous at b*", "b* = 0"));
  }

  if (diffusive) {
    out.push_back(point_check("V' continuous at 0", 0.0, v.first(0.0) - v.first_left(0.0), tol));
  } else {
    auto r = skipped("V' continuous at 0",
                     "bounded variation: W(0) = 1/c makes V' jump at 0");
    r.grid = {0.0};
    r.residuals = {v.first(0.0) - v.first_left(0.0)};
    out.push_back(std::move(r));
  }

  ResidualReport mono;
  mono.name = "V nondecreasing";
  mono.one_sided = true;
  mono.tolerance = tol;
  mono.grid = interior_grid(-opt.region_width, opt.concavity_upper, 2000);
  for (double x : mono.grid) mono.residuals.push_back(-v.first(x));
  finish(mono);
  out.push_back(std::move(mono));

  ResidualReport bound;
  bound.name = "0 <= V <= K/q";
  bound.one_sided = true;
  bound.tolerance = 1e-9 * params.K / params.q;
  bound.grid = interior_grid(-opt.region_width, opt.concavity_upper, 500);
  for (double x : bound.grid) {
    const double val = v.value(x);
    bound.residuals.push_back(std::max(-val, val - params.K / params.q));
  }
  finish(bound);
  out.push_back(std::move(bound));
  return out;
}

bool all_pass(const std::vector<ResidualReport>& reports) {
  return std::all_of(reports.begin(), reports.end(),
                     [](const ResidualReport& r) { return r.pass; });
}

}  // namespace parisian

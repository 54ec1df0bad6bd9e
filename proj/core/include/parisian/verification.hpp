#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "parisian/levy_model.hpp"
#include "parisian/parisian_control.hpp"

namespace parisian {

// A twice differentiable function together with the points where its
// derivatives may jump; the integral part of the generator is split there.
struct Evaluable {
  std::function<double(double)> value;
  std::function<double(double)> first;
  std::function<double(double)> second;
  std::vector<double> kinks;
};

Evaluable as_evaluable(const ValueFunction& v);

struct GeneratorResult {
  double value = 0.0;
  double error_estimate = 0.0;  // summed quadrature error estimates
};

// Gamma g(x) = d g'(x) + sigma^2/2 g''(x)
//            + sum_i eta_i (alpha_i int_0^inf g(x - z) e^{-alpha_i z} dz - g(x)).
GeneratorResult generator_apply(const LevyModel& model, const Evaluable& g, double x);

struct ResidualReport {
  std::string name;
  std::vector<double> grid;
  std::vector<double> residuals;
  double max_abs = 0.0;   // max |r| (two-sided) or max r (one-sided)
  double worst_x = 0.0;
  double tolerance = 0.0;
  double max_quadrature_error = 0.0;
  bool one_sided = false;  // pass iff r <= tol instead of |r| <= tol
  bool skipped = false;
  bool pass = false;
  std::string note;
};

struct VerificationOptions {
  std::size_t points_per_region = 400;
  double region_width = 5.0;
  double concavity_upper = 50.0;
  double concavity_tolerance = 1e-8;
  double smoothness_tolerance = 1e-8;
};

// Residuals of the three generator identities on (-w, 0), (0, b*), (b*, b*+w)
// with tolerance 1e-6 K/q. The middle region is skipped when b* = 0.
std::vector<ResidualReport> check_generator_identities(const LevyModel& model,
                                                       const ControlParams& params,
                                                       const ValueFunction& v,
                                                       const VerificationOptions& opt = {});

// One-sided HJB check (Gamma - q - p 1{x<0}) V + 1{x>=0} K max(0, 1 - V') <= tol.
ResidualReport check_hjb(const LevyModel& model, const ControlParams& params,
                         const ValueFunction& v, const VerificationOptions& opt = {});

// V'' <= tol on (0, 50), V'(b*) = 1 and C^1 (C^2 with a Gaussian part) at b*,
// C^1 at 0 with a Gaussian part, V nondecreasing and 0 <= V <= K/q.
std::vector<ResidualReport> check_concavity_and_smoothness(const LevyModel& model,
                                                           const ControlParams& params,
                                                           const ValueFunction& v,
                                                           const VerificationOptions& opt = {});

bool all_pass(const std::vector<ResidualReport>& reports);

}  // namespace parisian

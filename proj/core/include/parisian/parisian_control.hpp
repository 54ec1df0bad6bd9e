#pragma once

#include <string>
#include <vector>

#include "parisian/exp_sum.hpp"
#include "parisian/levy_model.hpp"
#include "parisian/scale_functions.hpp"

namespace parisian {

// How the zero/positive threshold decision is taken.
//  minimize_h:    b* = argmin h_p, positive iff h_p(0) < Z'_{q,p}(0).
//  theorem_cases: b* = 0 whenever p <= p_min, otherwise positive iff the
//                 closed-form positivity inequality holds.
// The two agree for p > p_min; below p_min they can differ (see README).
enum class ThresholdRule { minimize_h, theorem_cases };

enum class ThresholdBranch { zero_threshold, positive_threshold };

const char* to_string(ThresholdRule rule);
const char* to_string(ThresholdBranch branch);

struct ThresholdSolution {
  double b_star = 0.0;
  double p_min = 0.0;
  bool condition_holds = false;    // closed-form positivity inequality
  bool general_condition = false;  // h_p(0) < Z'_{q,p}(0)
  double h_at_b_star = 0.0;
  ThresholdBranch branch = ThresholdBranch::zero_threshold;
  ThresholdRule rule = ThresholdRule::minimize_h;
  bool at_p_min = false;     // p within root tolerance of p_min
  bool rules_agree = true;   // both rules pick the same branch
  double b_root = 0.0;       // root of h_p(b) = Z'_{q,p}(b)
  double b_minimizer = 0.0;  // golden-section minimiser of h_p
};

// Performance of the refraction strategy at level b, normalised by h:
//   x <= 0:      e^{Phi(p+q) x} / h
//   0 <= x <= b: Z_{q,p}(x) / h
//   x >= b:      (Z_{q,p}(x) + K int_b^x WW(x-y)(Z'_{q,p}(y) - h) dy) / h
// Derivatives come from the closed forms; at 0 and b they are right limits.
class ValueFunction {
 public:
  ValueFunction(const ScaleSet& scales, double b, double normalizer);

  double operator()(double x) const { return value(x); }
  double value(double x) const;
  double first(double x) const;
  double second(double x) const;
  // One-sided limits at a junction.
  double first_left(double x) const;
  double second_left(double x) const;

  double threshold() const { return b_; }
  double normalizer() const { return h_; }
  double left_rate() const { return left_rate_; }
  std::vector<double> kinks() const;

 private:
  double b_;
  double h_;
  double left_rate_;
  ExpSum lower_, lower1_, lower2_;  // on [0, b], argument x
  ExpSum upper_, upper1_, upper2_;  // on [b, inf), argument x - b
};

class ParisianProblem {
 public:
  ParisianProblem(const LevyModel& model, const ControlParams& params);

  const LevyModel& model() const { return scales_.model(); }
  const ControlParams& params() const { return params_; }
  const ScaleSet& scales() const { return scales_; }

  // h_p(b) = Phi_K(q) int_0^inf e^{-Phi_K(q) y} Z'_{q,p}(b + y) dy, closed form.
  double h_p(double b) const;
  double h_p_prime(double b) const;
  // h_p(b) - h_p(b0) without cancellation.
  double h_p_increment(double b, double b0) const;
  const ExpSum& h_p_closed_form() const { return h_; }

  // h_p(0) = Phi_K (Phi(p+q) - p/K) / (Phi_K - Phi(p+q)); PoleError at p_min.
  double h_p_zero_closed_form() const;

  // p_min = psi(Phi_K(q)) - q, the root of Phi_K(q) = Phi(p + q).
  double p_min() const;
  double condition_lhs() const;
  double condition_rhs() const;
  // Strict closed-form inequality LHS > RHS (meaningful for p > p_min).
  bool positivity_condition() const;
  // h_p(0) < Z'_{q,p}(0+).
  bool general_condition() const;

  ThresholdSolution solve_b_star(ThresholdRule rule = ThresholdRule::minimize_h) const;
  ValueFunction value_function(const ThresholdSolution& solution) const;
  ValueFunction performance_general_b(double b) const;

 private:
  ControlParams params_;
  ScaleSet scales_;
  ExpSum h_;
};

}  // namespace parisian

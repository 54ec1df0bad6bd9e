#include "parisian/parisian_control.hpp"

#include <algorithm>
#include <cmath>

#include "parisian/errors.hpp"
#include "parisian/numerics.hpp"

namespace parisian {

namespace {

// Pole guard for the closed form of h_p(0).
constexpr double kPoleTolerance = 1e-8;
// The two b* routes must agree to this absolute tolerance.
constexpr double kThresholdAgreement = 1e-8;

}  // namespace

const char* to_string(ThresholdRule rule) {
  return rule == ThresholdRule::minimize_h ? "minimize_h" : "theorem_cases";
}

const char* to_string(ThresholdBranch branch) {
  return branch == ThresholdBranch::zero_threshold ? "zero_threshold" : "positive_threshold";
}

ValueFunction::ValueFunction(const ScaleSet& scales, double b, double normalizer)
    : b_(b), h_(normalizer), left_rate_(scales.phi_pq()) {
  if (!(b >= 0.0)) throw DomainError("value function: b must be >= 0");
  if (!(normalizer > 0.0)) throw DomainError("value function: normalizer must be positive");
  const double inv_h = 1.0 / h_;
  lower_ = scales.z_qp().scaled(inv_h);
  lower1_ = lower_.derivative();
  lower2_ = lower1_.derivative();

  const ExpSum integrand = scales.z_qp_prime().shifted(b) - ExpSum::constant(h_);
  const ExpSum refracted_part = scales.w_refracted().convolve(integrand).scaled(scales.K());
  upper_ = (scales.z_qp().shifted(b) + refracted_part).scaled(inv_h);
  upper1_ = upper_.derivative();
  upper2_ = upper1_.derivative();
}

double ValueFunction::value(double x) const {
  if (x < 0.0) return std::exp(left_rate_ * x) / h_;
  if (x < b_) return lower_(x);
  return upper_(x - b_);
}

double ValueFunction::first(double x) const {
  if (x < 0.0) return left_rate_ * std::exp(left_rate_ * x) / h_;
  if (x < b_) return lower1_(x);
  return upper1_(x - b_);
}

double ValueFunction::second(double x) const {
  if (x < 0.0) return left_rate_ * left_rate_ * std::exp(left_rate_ * x) / h_;
  if (x < b_) return lower2_(x);
  return upper2_(x - b_);
}

double ValueFunction::first_left(double x) const {
  if (x <= 0.0) return left_rate_ * std::exp(left_rate_ * x) / h_;
  if (x <= b_) return lower1_(x);
  return upper1_(x - b_);
}

double ValueFunction::second_left(double x) const {
  if (x <= 0.0) return left_rate_ * left_rate_ * std::exp(left_rate_ * x) / h_;
  if (x <= b_) return lower2_(x);
  return upper2_(x - b_);
}

std::vector<double> ValueFunction::kinks() const {
  if (b_ > 0.0) return {0.0, b_};
  return {0.0};
}

ParisianProblem::ParisianProblem(const LevyModel& model, const ControlParams& params)
    : params_(params), scales_(model, params.q, params.p, params.K) {
  const double phi_k = scales_.phi_K();
  if (!(phi_k > scales_.z_qp_prime().max_rate())) {
    throw ConsistencyError("h_p: Phi_K(q) does not dominate the growth of Z'_{q,p}");
  }
  std::vector<ExpTerm> terms;
  for (const auto& t : scales_.z_qp_prime().terms()) {
    terms.push_back({phi_k * t.coef / (phi_k - t.rate), t.rate, 0});
  }
  h_ = ExpSum(std::move(terms));
}

double ParisianProblem::h_p(double b) const {
  if (!(b >= 0.0)) throw DomainError("h_p: b must be >= 0");
  return h_(b);
}

double ParisianProblem::h_p_prime(double b) const { return h_.derivative()(b); }

double ParisianProblem::h_p_increment(double b, double b0) const { return h_.increment(b, b0); }

double ParisianProblem::h_p_zero_closed_form() const {
  const double phi_k = scales_.phi_K();
  const double phi_pq = scales_.phi_pq();
  const double denominator = phi_k - phi_pq;
  if (std::abs(denominator) < kPoleTolerance) {
    throw PoleError("h_p(0) closed form: p is at p_min");
  }
  return phi_k * (phi_pq - params_.p / params_.K) / denominator;
}

double ParisianProblem::p_min() const { return model().psi(scales_.phi_K()) - params_.q; }

double ParisianProblem::condition_lhs() const {
  const double phi_pq = scales_.phi_pq();
  return phi_pq * phi_pq / params_.p - phi_pq * w_at_zero(model());
}

double ParisianProblem::condition_rhs() const {
  return scales_.phi_K() * (1.0 / params_.K - w_at_zero(model()));
}

bool ParisianProblem::positivity_condition() const { return condition_lhs() > condition_rhs(); }

bool ParisianProblem::general_condition() const {
  return h_(0.0) < scales_.z_qp_prime()(0.0);
}

ThresholdSolution ParisianProblem::solve_b_star(ThresholdRule rule) const {
  ThresholdSolution s;
  s.rule = rule;
  s.p_min = p_min();
  s.condition_holds = positivity_condition();
  s.general_condition = general_condition();
  s.at_p_min = std::abs(scales_.phi_K() - scales_.phi_pq()) < kPoleTolerance;

  const bool theorem_positive = params_.p > s.p_min && !s.at_p_min && s.condition_holds;
  const bool minimize_positive = s.general_condition;
  s.rules_agree = theorem_positive == minimize_positive;
  bool positive = rule == ThresholdRule::minimize_h ? minimize_positive : theorem_positive;

  const ExpSum& z1 = scales_.z_qp_prime();
  auto gap = [&](double b) { return h_(b) - z1(b); };
  if (positive && !(gap(0.0) < 0.0)) positive = false;

  if (positive) {
    // h_p' = Phi_K (h_p - Z'_{q,p}) changes sign once, inside [0, c*].
    double hi = std::max(scales_.c_star(), 1e-3);
    while (!(gap(hi) > 0.0)) {
      hi *= 2.0;
      if (hi > 1e6) throw ConsistencyError("b*: h_p - Z'_{q,p} never turns positive");
    }
    s.b_root = numerics::find_root(gap, 0.0, hi, "b* (h_p = Z'_{q,p})");
    s.b_minimizer = numerics::golden_section_minimize(
        [&](double a, double b) { return h_.increment(a, b); }, 0.0, hi, 1e-13);
    if (std::abs(s.b_root - s.b_minimizer) > kThresholdAgreement) {
      throw ConsistencyError("b*: root and minimiser disagree");
    }
    s.b_star = s.b_root;
    s.branch = ThresholdBranch::positive_threshold;
  } else {
    s.b_star = 0.0;
    s.branch = ThresholdBranch::zero_threshold;
  }
  s.h_at_b_star = h_(s.b_star);
  return s;
}

ValueFunction ParisianProblem::value_function(const ThresholdSolution& solution) const {
  return ValueFunction(scales_, solution.b_star, h_(solution.b_star));
}

ValueFunction ParisianProblem::performance_general_b(double b) const {
  if (!(b >= 0.0)) throw DomainError("performance_general_b: b must be >= 0");
  return ValueFunction(scales_, b, h_(b));
}

}  // namespace parisian

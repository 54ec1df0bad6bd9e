#pragma once

#include <span>
#include <vector>

namespace parisian {

// coef * x^power * exp(rate * x)
struct ExpTerm {
  double coef = 0.0;
  double rate = 0.0;
  int power = 0;
};

// Finite sum of ExpTerms, the closed-form carrier for every scale function.
// Terms with the same (rate, power) are merged on construction; when a merge
// cancels to rounding level relative to its parts the term is dropped, so
// growing exponentials that cancel analytically vanish exactly.
class ExpSum {
 public:
  ExpSum() = default;
  explicit ExpSum(std::vector<ExpTerm> terms);

  static ExpSum constant(double c);
  static ExpSum exponential(double coef, double rate);

  std::span<const ExpTerm> terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  double operator()(double x) const;
  // f(x) - f(x0) through expm1, accurate when x is close to x0.
  double increment(double x, double x0) const;

  ExpSum derivative() const;
  // x -> integral_0^x f(y) dy
  ExpSum antiderivative() const;
  // x -> f(x + a)
  ExpSum shifted(double a) const;
  ExpSum scaled(double s) const;
  // x -> integral_0^x f(x - y) g(y) dy. Both operands must be pure
  // exponentials (power 0); coinciding rates give x e^{rate x}.
  ExpSum convolve(const ExpSum& g) const;
  // integral_0^inf e^{-s y} f(y) dy; requires s > every rate.
  double laplace(double s) const;

  // Largest rate carrying a nonzero coefficient (-inf when empty).
  double max_rate() const;
  // Coefficient of the power-0 term with exactly this rate (0 if absent).
  double coefficient(double rate) const;

  friend ExpSum operator+(const ExpSum& a, const ExpSum& b);
  friend ExpSum operator-(const ExpSum& a, const ExpSum& b);

 private:
  std::vector<ExpTerm> terms_;
};

}  // namespace parisian

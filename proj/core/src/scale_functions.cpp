#include "parisian/scale_functions.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "parisian/errors.hpp"
#include "parisian/numerics.hpp"

namespace parisian {

namespace {

// Smallest x >= 0 where an increasing function crosses zero; 0 when it is
// already nonnegative at the origin.
double first_nonnegative(const ExpSum& increasing, const char* what) {
  if (increasing(0.0) >= 0.0) return 0.0;
  double hi = 1.0;
  while (increasing(hi) < 0.0) {
    hi *= 2.0;
    if (hi > 1e6) throw ConsistencyError(std::string(what) + ": no sign change found");
  }
  return numerics::find_root([&](double x) { return increasing(x); }, 0.0, hi, what);
}

// Z_{q,p} on [0, inf) from Z_{q,p}(x) = p int_0^inf e^{-Phi(p+q) y} W(x + y) dy.
ExpSum build_z_qp(const ExpSum& w, double p, double phi_pq) {
  std::vector<ExpTerm> terms;
  for (const auto& t : w.terms()) {
    terms.push_back({p * t.coef / (phi_pq - t.rate), t.rate, 0});
  }
  return ExpSum(std::move(terms));
}

}  // namespace

ExpSum build_w(const LevyModel& model, double q) {
  if (!(q > 0.0)) throw DomainError("build_w: q must be positive");
  std::vector<ExpTerm> terms;
  for (double theta : model.roots(q)) {
    terms.push_back({1.0 / model.psi_prime(theta), theta, 0});
  }
  return ExpSum(std::move(terms));
}

double z_general(const LevyModel& model, const ExpSum& w, double q, double theta, double x) {
  if (!(theta >= 0.0)) throw DomainError("z_general: theta must be >= 0");
  if (x <= 0.0) return std::exp(theta * x);
  // e^{theta x} int_0^x e^{-theta y} A e^{r y} dy = A e^{theta x} expm1((r - theta) x)/(r - theta)
  double integral = 0.0;
  for (const auto& t : w.terms()) {
    integral += t.coef * numerics::expm1_ratio(t.rate - theta, x);
  }
  const double gap = model.psi(theta) - q;
  return std::exp(theta * x) * (1.0 - gap * integral);
}

double z_general(const LevyModel& model, double q, double theta, double x) {
  return z_general(model, build_w(model, q), q, theta, x);
}

ScaleSet::ScaleSet(const LevyModel& model, double q, double p, double K)
    : model_(model), refracted_(refract(model, K)), q_(q), p_(p), K_(K) {
  ControlParams{q, p, K}.validate(model);
  phi_q_ = phi(model_, q_);
  phi_pq_ = phi(model_, p_ + q_);
  phi_k_ = phi(refracted_, q_);

  w_ = build_w(model_, q_);
  w_prime_ = w_.derivative();
  w_second_ = w_prime_.derivative();
  z_q_ = ExpSum::constant(1.0) + w_.antiderivative().scaled(q_);

  z_qp_ = build_z_qp(w_, p_, phi_pq_);
  z_qp_prime_ = z_qp_.derivative();
  z_qp_second_ = z_qp_prime_.derivative();

  w_refracted_ = build_w(refracted_, q_);
  w_refracted_prime_ = w_refracted_.derivative();

  // W' and Z'_{q,p} are convex on (0, inf) (log-convex), so their minimisers
  // are where the next derivative turns nonnegative.
  a_star_ = first_nonnegative(w_second_, "a*");
  c_star_ = first_nonnegative(z_qp_second_, "c*");
}

double ScaleSet::W(double x) const { return x < 0.0 ? 0.0 : w_(x); }
double ScaleSet::W_prime(double x) const { return x < 0.0 ? 0.0 : w_prime_(x); }
double ScaleSet::Z(double x) const { return x <= 0.0 ? 1.0 : z_q_(x); }

double ScaleSet::Zqp(double x) const {
  return x < 0.0 ? std::exp(phi_pq_ * x) : z_qp_(x);
}

double ScaleSet::Zqp_prime(double x) const {
  return x < 0.0 ? phi_pq_ * std::exp(phi_pq_ * x) : z_qp_prime_(x);
}

double ScaleSet::Zqp_second(double x) const {
  return x < 0.0 ? phi_pq_ * phi_pq_ * std::exp(phi_pq_ * x) : z_qp_second_(x);
}

double ScaleSet::WW(double x) const { return x < 0.0 ? 0.0 : w_refracted_(x); }
double ScaleSet::WW_prime(double x) const { return x < 0.0 ? 0.0 : w_refracted_prime_(x); }

double ScaleSet::w_aux(double b, double x, double y) const {
  if (!(b >= 0.0)) throw DomainError("w_aux: b must be >= 0");
  double value = W(x - y);
  if (x < b) return value;
  // W'(z - y) vanishes for z < y, so the integral starts at lo = max(b, y).
  const double lo = std::max(b, y);
  if (!(x > lo)) return value;
  // int_lo^x WW(x - z) W'(z - y) dz = (WW * W'(a + .))(x - lo), a = lo - y >= 0.
  const ExpSum conv = w_refracted_.convolve(w_prime_.shifted(lo - y));
  return value + K_ * conv(x - lo);
}

double landmark_a_star(const LevyModel& model, double q) {
  const ExpSum w2 = build_w(model, q).derivative().derivative();
  return first_nonnegative(w2, "a*");
}

double landmark_c_star(const LevyModel& model, double q, double p) {
  const ExpSum z2 = build_z_qp(build_w(model, q), p, phi(model, p + q)).derivative().derivative();
  return first_nonnegative(z2, "c*");
}

}  // namespace parisian

#pragma once

#include "parisian/exp_sum.hpp"
#include "parisian/levy_model.hpp"

namespace parisian {

// W^(q) on [0, inf) by partial fractions of 1/(psi(theta) - q):
//   W^(q)(x) = sum_i e^{theta_i x} / psi'(theta_i)
// over the (simple, real) roots theta_i of psi(theta) = q.
ExpSum build_w(const LevyModel& model, double q);

// Z_q(x, theta) = e^{theta x}(1 - (psi(theta) - q) int_0^x e^{-theta y} W^(q)(y) dy).
double z_general(const LevyModel& model, double q, double theta, double x);
double z_general(const LevyModel& model, const ExpSum& w, double q, double theta, double x);

// Every scale function the control problem needs, for one (model, q, p, K).
// Immutable value object; evaluation is pure.
class ScaleSet {
 public:
  ScaleSet(const LevyModel& model, double q, double p, double K);

  const LevyModel& model() const { return model_; }
  const LevyModel& refracted_model() const { return refracted_; }
  double q() const { return q_; }
  double p() const { return p_; }
  double K() const { return K_; }

  double phi_q() const { return phi_q_; }    // Phi(q)
  double phi_pq() const { return phi_pq_; }  // Phi(p + q)
  double phi_K() const { return phi_k_; }    // Phi_K(q)

  // Closed forms on [0, inf).
  const ExpSum& w() const { return w_; }
  const ExpSum& w_prime() const { return w_prime_; }
  const ExpSum& z_q() const { return z_q_; }
  const ExpSum& z_qp() const { return z_qp_; }
  const ExpSum& z_qp_prime() const { return z_qp_prime_; }
  const ExpSum& z_qp_second() const { return z_qp_second_; }
  const ExpSum& w_refracted() const { return w_refracted_; }

  // Functions on the real line. W vanishes on x < 0, Z^(q) is 1 there and
  // Z_{q,p}(x) = e^{Phi(p+q) x}. Derivatives at x = 0 are right limits.
  double W(double x) const;
  double W_prime(double x) const;
  double Z(double x) const;
  double Zqp(double x) const;
  double Zqp_prime(double x) const;
  double Zqp_second(double x) const;
  double WW(double x) const;  // refracted scale function of Y = X - K t
  double WW_prime(double x) const;

  // Landmarks: minimisers over [0, inf) of W^(q)' and Z_{q,p}'.
  double a_star() const { return a_star_; }
  double c_star() const { return c_star_; }

  // w_b^(q)(x; y) = W(x - y) + K 1{x >= b} int_b^x WW(x - z) W'(z - y) dz.
  double w_aux(double b, double x, double y) const;

 private:
  LevyModel model_;
  LevyModel refracted_;
  double q_, p_, K_;
  double phi_q_, phi_pq_, phi_k_;
  ExpSum w_, w_prime_, w_second_, z_q_;
  ExpSum z_qp_, z_qp_prime_, z_qp_second_;
  ExpSum w_refracted_, w_refracted_prime_;
  double a_star_ = 0.0;
  double c_star_ = 0.0;
};

double landmark_a_star(const LevyModel& model, double q);
double landmark_c_star(const LevyModel& model, double q, double p);

}  // namespace parisian

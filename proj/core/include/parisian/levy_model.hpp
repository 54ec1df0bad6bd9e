#pragma once

#include <span>
#include <string>
#include <vector>

namespace parisian {

// One exponential component of the Levy density:
// nu(dz) = rate * decay * exp(-decay z) dz on z > 0.
struct JumpComponent {
  double rate = 0.0;   // eta_i, jump intensity of the component
  double decay = 0.0;  // alpha_i, mean jump size is 1/alpha_i
};

enum class VariationKind { bounded, unbounded };

// Spectrally negative Levy process with rational Laplace exponent
//
//   psi(l) = drift * l + sigma^2/2 * l^2 - sum_i eta_i l / (alpha_i + l).
//
// With sigma = 0 the drift is the premium rate c > 0 of X_t = c t - S_t
// (bounded variation); with sigma > 0 it is the linear coefficient mu of the
// diffusion form. Immutable after construction.
class LevyModel {
 public:
  static LevyModel bounded_variation(double premium_rate, std::vector<JumpComponent> jumps);
  static LevyModel with_diffusion(double sigma, double drift_mu,
                                  std::vector<JumpComponent> jumps = {});

  double sigma() const { return sigma_; }
  // Linear coefficient of psi: c in bounded variation, mu otherwise.
  double drift() const { return drift_; }
  std::span<const JumpComponent> jumps() const { return jumps_; }
  VariationKind variation() const {
    return sigma_ > 0.0 ? VariationKind::unbounded : VariationKind::bounded;
  }
  bool bounded_variation() const { return variation() == VariationKind::bounded; }
  // Total jump intensity sum_i eta_i.
  double jump_intensity() const;

  // psi and psi' on the whole real line away from the poles -alpha_i. The
  // public laplace_exponent() restricts to lambda >= 0.
  double psi(double theta) const;
  double psi_prime(double theta) const;

  // All real roots of psi(theta) = q for q > 0, ascending. They are simple and
  // interlace with the poles, so each is bracketed separately.
  std::vector<double> roots(double q) const;

  std::string describe() const;

 private:
  LevyModel(double sigma, double drift, std::vector<JumpComponent> jumps);

  double sigma_ = 0.0;
  double drift_ = 0.0;
  std::vector<JumpComponent> jumps_;  // sorted by ascending decay
};

// Discount rate q, Parisian rate p and maximal dividend rate K.
struct ControlParams {
  double q = 0.0;
  double p = 0.0;
  double K = 0.0;

  // Throws AdmissibilityError unless q, p, K > 0 and, in bounded variation,
  // K < c.
  void validate(const LevyModel& model) const;
};

double laplace_exponent(const LevyModel& model, double lambda);

// Largest nonnegative root of psi(lambda) = q.
double phi(const LevyModel& model, double q);

// Model of Y_t = X_t - K t, psi_K(l) = psi(l) - K l.
LevyModel refract(const LevyModel& model, double K);

// W^(q)(0): 1/c in bounded variation, 0 otherwise (independent of q).
double w_at_zero(const LevyModel& model);

}  // namespace parisian

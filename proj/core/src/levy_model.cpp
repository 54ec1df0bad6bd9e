#include "parisian/levy_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "parisian/errors.hpp"
#include "parisian/numerics.hpp"

namespace parisian {

namespace {

void check_jumps(const std::vector<JumpComponent>& jumps) {
  for (const auto& j : jumps) {
    if (!(j.rate > 0.0) || !std::isfinite(j.rate)) {
      throw UnsupportedModelError("jump rate must be positive and finite");
    }
    if (!(j.decay > 0.0) || !std::isfinite(j.decay)) {
      throw UnsupportedModelError("jump decay must be positive and finite");
    }
  }
  for (std::size_t i = 1; i < jumps.size(); ++i) {
    if (jumps[i].decay == jumps[i - 1].decay) {
      throw UnsupportedModelError("jump decays must be pairwise distinct");
    }
  }
}

// Moves a bracket endpoint off a pole until f has the expected sign.
template <typename F>
double off_pole(F&& f, double pole, double direction, bool want_positive) {
  double step = 1e-12 * std::max(1.0, std::abs(pole));
  for (int i = 0; i < 60; ++i) {
    const double x = pole + direction * step;
    const double v = f(x);
    if (std::isfinite(v) && ((v > 0.0) == want_positive) && v != 0.0) return x;
    step *= 0.5;
  }
  throw UnsupportedModelError("cannot bracket root next to pole " + std::to_string(pole));
}

}  // namespace

LevyModel::LevyModel(double sigma, double drift, std::vector<JumpComponent> jumps)
    : sigma_(sigma), drift_(drift), jumps_(std::move(jumps)) {
  std::sort(jumps_.begin(), jumps_.end(),
            [](const JumpComponent& a, const JumpComponent& b) { return a.decay < b.decay; });
  check_jumps(jumps_);
}

LevyModel LevyModel::bounded_variation(double premium_rate, std::vector<JumpComponent> jumps) {
  if (!(premium_rate > 0.0) || !std::isfinite(premium_rate)) {
    throw UnsupportedModelError("premium rate c must be positive");
  }
  return LevyModel(0.0, premium_rate, std::move(jumps));
}

LevyModel LevyModel::with_diffusion(double sigma, double drift_mu,
                                    std::vector<JumpComponent> jumps) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw UnsupportedModelError("sigma must be positive for the diffusion family");
  }
  if (!std::isfinite(drift_mu)) throw UnsupportedModelError("drift mu must be finite");
  return LevyModel(sigma, drift_mu, std::move(jumps));
}

double LevyModel::jump_intensity() const {
  double s = 0.0;
  for (const auto& j : jumps_) s += j.rate;
  return s;
}

double LevyModel::psi(double theta) const {
  // sum_i eta_i theta / (alpha_i + theta), written as one pass so that the
  // reduced form never subtracts two large numbers for theta >= 0.
  double jump_part = 0.0;
  for (const auto& j : jumps_) jump_part += j.rate * theta / (j.decay + theta);
  return drift_ * theta + 0.5 * sigma_ * sigma_ * theta * theta - jump_part;
}

double LevyModel::psi_prime(double theta) const {
  double jump_part = 0.0;
  for (const auto& j : jumps_) {
    const double d = j.decay + theta;
    jump_part += j.rate * j.decay / (d * d);
  }
  return drift_ + sigma_ * sigma_ * theta - jump_part;
}

std::vector<double> LevyModel::roots(double q) const {
  if (!(q > 0.0)) throw DomainError("roots of psi = q require q > 0");
  auto f = [this, q](double t) { return psi(t) - q; };

  std::vector<double> out;
  out.reserve(jumps_.size() + 2);

  // Negative roots. Poles at -alpha_1 > -alpha_2 > ... (jumps sorted by decay).
  // f(0) = -q < 0 and f -> +inf at (-alpha_1)^+, so one root in (-alpha_1, 0).
  // Between -alpha_{i+1} and -alpha_i: f -> +inf at the left pole and -inf at
  // the right pole. Left of the last pole only a Gaussian part brings f back.
  if (jumps_.empty()) {
    if (sigma_ > 0.0) {
      double lo = -1.0;
      while (f(lo) <= 0.0) lo *= 2.0;
      out.push_back(numerics::find_root(f, lo, 0.0, "negative root of psi = q"));
    }
  } else {
    const std::size_t n = jumps_.size();
    if (sigma_ > 0.0) {
      const double pole = -jumps_[n - 1].decay;
      const double hi = off_pole(f, pole, -1.0, false);
      double lo = pole - 1.0;
      while (f(lo) <= 0.0) lo = pole - 2.0 * (pole - lo);
      out.push_back(numerics::find_root(f, lo, hi, "root left of the last pole"));
    }
    for (std::size_t i = n - 1; i >= 1; --i) {
      const double left_pole = -jumps_[i].decay;
      const double right_pole = -jumps_[i - 1].decay;
      const double lo = off_pole(f, left_pole, +1.0, true);
      const double hi = off_pole(f, right_pole, -1.0, false);
      out.push_back(numerics::find_root(f, lo, hi, "root between poles"));
    }
    const double lo = off_pole(f, -jumps_[0].decay, +1.0, true);
    out.push_back(numerics::find_root(f, lo, 0.0, "root in (-alpha_1, 0)"));
  }

  out.push_back(phi(*this, q));

  for (std::size_t i = 0; i < out.size(); ++i) {
    const double slope = psi_prime(out[i]);
    const double scale = std::max({1.0, std::abs(drift_), sigma_ * sigma_ * std::abs(out[i])});
    if (std::abs(slope) < 1e-10 * scale) {
      throw UnsupportedModelError("psi(theta) = q has a repeated root; perturb the jump decays");
    }
    if (i > 0 && !(out[i] > out[i - 1])) {
      throw UnsupportedModelError("roots of psi(theta) = q are not simple");
    }
  }
  return out;
}

std::string LevyModel::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (bounded_variation()) {
    os << "bounded variation: c=" << drift_;
  } else {
    os << "unbounded variation: sigma=" << sigma_ << " mu=" << drift_;
  }
  for (const auto& j : jumps_) os << " jump(rate=" << j.rate << ", alpha=" << j.decay << ")";
  return os.str();
}

void ControlParams::validate(const LevyModel& model) const {
  if (!(q > 0.0) || !std::isfinite(q)) throw AdmissibilityError("q must be positive");
  if (!(p > 0.0) || !std::isfinite(p)) throw AdmissibilityError("p must be positive");
  if (!(K > 0.0) || !std::isfinite(K)) throw AdmissibilityError("K must be positive");
  if (model.bounded_variation() && !(K < model.drift())) {
    throw AdmissibilityError("K must be less than the drift c for bounded variation");
  }
}

double laplace_exponent(const LevyModel& model, double lambda) {
  if (!(lambda >= 0.0)) throw DomainError("laplace_exponent: lambda must be >= 0");
  return model.psi(lambda);
}

double phi(const LevyModel& model, double q) {
  if (!(q >= 0.0)) throw DomainError("phi: q must be >= 0");
  auto f = [&](double t) { return model.psi(t) - q; };
  const double slope0 = model.psi_prime(0.0);
  if (q == 0.0 && slope0 >= 0.0) return 0.0;

  double hi = 1.0;
  while (f(hi) <= 0.0) hi *= 2.0;
  double lo = 0.0;
  if (q == 0.0) {
    // psi < 0 just right of 0; walk down from hi until we are inside (0, Phi(0)).
    lo = hi;
    while (f(lo) >= 0.0) lo *= 0.5;
  } else {
    // Tighten the bracket: largest power-of-two fraction of hi with f <= 0.
    double t = hi * 0.5;
    while (t > 0.0 && f(t) > 0.0) t *= 0.5;
    lo = t;
  }
  return numerics::find_root(f, lo, hi, "Phi(q)");
}

LevyModel refract(const LevyModel& model, double K) {
  if (!(K > 0.0)) throw AdmissibilityError("refract: K must be positive");
  std::vector<JumpComponent> jumps(model.jumps().begin(), model.jumps().end());
  if (model.bounded_variation()) {
    if (!(K < model.drift())) {
      throw AdmissibilityError("refract: K must be less than the drift c for bounded variation");
    }
    return LevyModel::bounded_variation(model.drift() - K, std::move(jumps));
  }
  return LevyModel::with_diffusion(model.sigma(), model.drift() - K, std::move(jumps));
}

double w_at_zero(const LevyModel& model) {
  return model.bounded_variation() ? 1.0 / model.drift() : 0.0;
}

}  // namespace parisian

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "parisian/levy_model.hpp"

namespace parisian {

// Per-excursion exponential clock (the definition) or, equivalently by
// memorylessness, rate-p Poisson inspections while the surplus is negative.
enum class ParisianClock { per_excursion, poisson_inspection };

enum class Identity { up_classical, up_parisian, down_before_up, down_ever };

const char* to_string(Identity which);
std::optional<Identity> identity_from_string(const std::string& name);

struct SimConfig {
  std::size_t n_paths = 100000;
  std::uint64_t seed = 1;
  // Truncation T of the infinite horizon; <= 0 selects log(10^4)/q.
  double time_horizon = 0.0;
  // Euler step, required when the model has a Gaussian part.
  std::optional<double> euler_step;
  double start_x = 0.0;
  double level_b = 0.0;
  ParisianClock clock = ParisianClock::per_excursion;
  unsigned threads = 1;
};

struct SimEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_paths = 0;
  std::pair<double, double> ci95{0.0, 0.0};
  double truncation_bias_bound = 0.0;
  std::uint64_t seed = 0;
  double horizon = 0.0;

  bool covers(double value) const { return ci95.first <= value && value <= ci95.second; }
  double z_score(double reference) const;
};

double default_horizon(double q);

// Discounted dividends of the refraction strategy at level config.level_b up
// to Parisian ruin, started at config.start_x.
SimEstimate simulate_value(const LevyModel& model, const ControlParams& params,
                           const SimConfig& config);

struct IdentityEstimate {
  Identity which = Identity::up_classical;
  SimEstimate estimate;
  double analytic = 0.0;
  double z_score = 0.0;
};

// Fluctuation identity of the uncontrolled process X started at
// config.start_x with upper level config.level_b.
IdentityEstimate estimate_identity(const LevyModel& model, const ControlParams& params,
                                   const SimConfig& config, Identity which);

struct AppendixReport {
  SimEstimate lhs;              // E_x[e^{-q nu_b^-} Z_{q,p}(Y_{nu_b^-}); nu_b^- < inf]
  double rhs_symbolic = 0.0;    // closed-form right-hand side
  double rhs_quadrature = 0.0;  // right-hand side by quadrature over w_b^(q)
  double second_term_quadrature = 0.0;  // K WW(x-b) int e^{-Phi_K z} Z'(b+z) dz
  double second_term_closed = 0.0;      // (K/Phi_K) WW(x-b) h_p(b)
  double z_score = 0.0;
};

AppendixReport verify_appendix_identity(const LevyModel& model, const ControlParams& params,
                                        const SimConfig& config, double b, double x);

}  // namespace parisian

#include "parisian/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "parisian/errors.hpp"
#include "parisian/numerics.hpp"
#include "parisian/parisian_control.hpp"
#include "parisian/scale_functions.hpp"

namespace parisian {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based stream: draw n of path i is a pure function of (seed, i, n).
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t path) : key_(splitmix64(seed ^ splitmix64(path))) {}

  std::uint64_t next() { return splitmix64(key_ + 0xd1b54a32d192ed03ULL * ++counter_); }

  // Uniform on the open interval (0, 1).
  double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

  double exponential(double rate) { return -std::log(uniform()) / rate; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double a = 2.0 * M_PI * uniform();
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// What a single path does and when it stops.
struct PathSpec {
  double level = kInf;          // refraction level: pay `dividend_rate` while at or above
  double dividend_rate = 0.0;
  double upper_stop = kInf;     // stop on reaching this level from below
  double lower_stop = -kInf;    // stop on going strictly below this level
  bool parisian = false;        // Parisian ruin below 0 at rate p
};

enum class PathEnd { horizon, ruined, hit_upper, hit_lower };

struct PathOutcome {
  double dividends = 0.0;
  PathEnd end = PathEnd::horizon;
  double time = 0.0;
  double position = 0.0;
};

class PathEngine {
 public:
  PathEngine(const LevyModel& model, double q, double p, double horizon,
             std::optional<double> euler_step, ParisianClock clock)
      : model_(model), q_(q), p_(p), horizon_(horizon), clock_(clock) {
    intensity_ = model.jump_intensity();
    for (const auto& j : model.jumps()) cumulative_.push_back(j.rate);
    for (std::size_t i = 1; i < cumulative_.size(); ++i) cumulative_[i] += cumulative_[i - 1];
    if (!model.bounded_variation()) {
      if (!euler_step || !(*euler_step > 0.0)) {
        throw ConfigError("simulation of a model with a Gaussian part needs a positive euler_step");
      }
      step_ = *euler_step;
    }
  }

  PathOutcome run(const PathSpec& spec, double x, Stream& rng) const {
    if (x >= spec.upper_stop) return {0.0, PathEnd::hit_upper, 0.0, x};
    if (x < spec.lower_stop) return {0.0, PathEnd::hit_lower, 0.0, x};
    return model_.bounded_variation() ? run_exact(spec, x, rng) : run_euler(spec, x, rng);
  }

 private:
  double jump_size(Stream& rng) const {
    const auto jumps = model_.jumps();
    const double u = rng.uniform() * intensity_;
    std::size_t i = 0;
    while (i + 1 < cumulative_.size() && u > cumulative_[i]) ++i;
    return rng.exponential(jumps[i].decay);
  }

  double next_jump(double t, Stream& rng) const {
    return intensity_ > 0.0 ? t + rng.exponential(intensity_) : kInf;
  }

  double discounted_flow(double rate, double t0, double t1) const {
    return rate * (std::exp(-q_ * t0) - std::exp(-q_ * t1)) / q_;
  }

  // Compound Poisson with positive drift: piecewise linear between jumps,
  // all crossing times exact.
  PathOutcome run_exact(const PathSpec& spec, double x, Stream& rng) const {
    const double c = model_.drift();
    const double slope_above = c - spec.dividend_rate;
    PathOutcome out;
    double t = 0.0;
    double u = x;
    double deadline = kInf;
    if (spec.parisian && u < 0.0 && clock_ == ParisianClock::per_excursion) {
      deadline = rng.exponential(p_);
    }

    while (true) {
      const double tj = next_jump(t, rng);
      while (t < tj) {
        double target = kInf;
        if (u < 0.0) target = 0.0;
        if (u < spec.level) target = std::min(target, spec.level);
        if (u < spec.upper_stop) target = std::min(target, spec.upper_stop);
        const bool above = u >= spec.level;
        const double slope = above ? slope_above : c;
        const double t_target = std::isfinite(target) ? t + (target - u) / slope : kInf;
        const double seg_end = std::min({tj, horizon_, t_target});

        if (spec.parisian && u < 0.0) {
          double ruin_at = kInf;
          if (clock_ == ParisianClock::per_excursion) {
            ruin_at = deadline;
          } else {
            ruin_at = t + rng.exponential(p_);
          }
          if (ruin_at <= seg_end) {
            out.end = PathEnd::ruined;
            out.time = ruin_at;
            out.position = u + c * (ruin_at - t);
            return out;
          }
        }
        if (above && spec.dividend_rate > 0.0) {
          out.dividends += discounted_flow(spec.dividend_rate, t, seg_end);
        }
        const bool reached = seg_end == t_target;
        u = reached ? target : u + slope * (seg_end - t);
        t = seg_end;
        if (!reached && t >= horizon_) {
          out.end = PathEnd::horizon;
          out.time = t;
          out.position = u;
          return out;
        }
        if (reached && target == spec.upper_stop) {
          out.end = PathEnd::hit_upper;
          out.time = t;
          out.position = u;
          return out;
        }
        if (reached && target == 0.0) deadline = kInf;
      }

      const bool was_nonnegative = u >= 0.0;
      u -= jump_size(rng);
      if (u < spec.lower_stop) {
        out.end = PathEnd::hit_lower;
        out.time = t;
        out.position = u;
        return out;
      }
      if (spec.parisian && was_nonnegative && u < 0.0 &&
          clock_ == ParisianClock::per_excursion) {
        deadline = t + rng.exponential(p_);
      }
    }
  }

  // Euler scheme for models with a Gaussian part. Level crossings are located
  // by linear interpolation within a step, so excursion timing carries an
  // O(sqrt(h)) bias.
  PathOutcome run_euler(const PathSpec& spec, double x, Stream& rng) const {
    const double sigma = model_.sigma();
    const double mu = model_.drift();
    PathOutcome out;
    double t = 0.0;
    double u = x;
    double deadline = kInf;
    if (spec.parisian && u < 0.0 && clock_ == ParisianClock::per_excursion) {
      deadline = rng.exponential(p_);
    }
    double tj = next_jump(t, rng);

    while (true) {
      if (t >= horizon_) {
        out.end = PathEnd::horizon;
        out.time = t;
        out.position = u;
        return out;
      }
      const double dt = std::min({step_, horizon_ - t, tj - t});
      const bool above = u >= spec.level;
      const double slope = above ? mu - spec.dividend_rate : mu;
      const double un = u + slope * dt + sigma * std::sqrt(dt) * rng.normal();
      const double tn = t + dt;
      auto crossing = [&](double level) { return t + dt * (level - u) / (un - u); };

      if (un >= spec.upper_stop) {
        const double tc = crossing(spec.upper_stop);
        if (spec.parisian && u < 0.0 && clock_ == ParisianClock::per_excursion &&
            deadline <= tc) {
          out.end = PathEnd::ruined;
          out.time = deadline;
          return out;
        }
        if (above && spec.dividend_rate > 0.0) {
          out.dividends += discounted_flow(spec.dividend_rate, t, tc);
        }
        out.end = PathEnd::hit_upper;
        out.time = tc;
        out.position = spec.upper_stop;
        return out;
      }
      if (un < spec.lower_stop) {
        const double tc = crossing(spec.lower_stop);
        out.end = PathEnd::hit_lower;
        out.time = tc;
        out.position = spec.lower_stop;
        return out;
      }

      if (spec.parisian) {
        double ruin_at = kInf;
        if (clock_ == ParisianClock::per_excursion) {
          if (u >= 0.0 && un < 0.0) {
            deadline = crossing(0.0) + rng.exponential(p_);
            if (deadline <= tn) ruin_at = deadline;
          } else if (u < 0.0 && un >= 0.0) {
            if (deadline <= crossing(0.0)) ruin_at = deadline;
            deadline = kInf;
          } else if (u < 0.0 && deadline <= tn) {
            ruin_at = deadline;
          }
        } else {
          double below = 0.0;
          double start = t;
          if (u < 0.0 && un < 0.0) {
            below = dt;
          } else if (u < 0.0) {
            below = crossing(0.0) - t;
          } else if (un < 0.0) {
            start = crossing(0.0);
            below = tn - start;
          }
          if (below > 0.0) {
            const double e = rng.exponential(p_);
            if (e < below) ruin_at = start + e;
          }
        }
        if (ruin_at < kInf) {
          if (above && spec.dividend_rate > 0.0) {
            out.dividends += discounted_flow(spec.dividend_rate, t, std::min(ruin_at, tn));
          }
          out.end = PathEnd::ruined;
          out.time = ruin_at;
          out.position = un;
          return out;
        }
      }

      if (above && spec.dividend_rate > 0.0) {
        out.dividends += discounted_flow(spec.dividend_rate, t, tn);
      }
      t = tn;
      u = un;
      if (t >= tj) {
        const bool was_nonnegative = u >= 0.0;
        u -= jump_size(rng);
        tj = next_jump(t, rng);
        if (u < spec.lower_stop) {
          out.end = PathEnd::hit_lower;
          out.time = t;
          out.position = u;
          return out;
        }
        if (spec.parisian && was_nonnegative && u < 0.0 &&
            clock_ == ParisianClock::per_excursion) {
          deadline = t + rng.exponential(p_);
        }
      }
    }
  }

  const LevyModel& model_;
  double q_;
  double p_;
  double horizon_;
  ParisianClock clock_;
  double intensity_ = 0.0;
  std::vector<double> cumulative_;
  double step_ = 0.0;
};

// Runs `sample(rng)` once per path with per-path streams and reduces with
// pairwise summation, so the result is independent of the thread count.
SimEstimate run_paths(const SimConfig& config, double horizon, double bias_bound,
                      const std::function<double(Stream&)>& sample) {
  if (config.n_paths == 0) throw ConfigError("n_paths must be positive");
  std::vector<double> values(config.n_paths);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Stream rng(config.seed, i);
      values[i] = sample(rng);
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(config.threads, 256));
  if (threads == 1) {
    work(0, values.size());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (values.size() + threads - 1) / threads;
    for (unsigned k = 0; k < threads; ++k) {
      const std::size_t begin = k * chunk;
      const std::size_t end = std::min(values.size(), begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(work, begin, end);
    }
  }

  const double n = static_cast<double>(values.size());
  SimEstimate est;
  est.n_paths = values.size();
  est.seed = config.seed;
  est.horizon = horizon;
  est.truncation_bias_bound = bias_bound;
  est.mean = numerics::pairwise_sum(values) / n;
  if (values.size() > 1) {
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double d = values[i] - est.mean;
      sq[i] = d * d;
    }
    est.std_error = std::sqrt(numerics::pairwise_sum(sq) / (n - 1.0) / n);
  }
  est.ci95 = {est.mean - 1.96 * est.std_error, est.mean + 1.96 * est.std_error};
  return est;
}

double resolve_horizon(const SimConfig& config, double q) {
  return config.time_horizon > 0.0 ? config.time_horizon : default_horizon(q);
}

}  // namespace

const char* to_string(Identity which) {
  switch (which) {
    case Identity::up_classical: return "up_classical";
    case Identity::up_parisian: return "up_parisian";
    case Identity::down_before_up: return "down_before_up";
    case Identity::down_ever: return "down_ever";
  }
  return "unknown";
}

std::optional<Identity> identity_from_string(const std::string& name) {
  for (Identity id : {Identity::up_classical, Identity::up_parisian, Identity::down_before_up,
                      Identity::down_ever}) {
    if (name == to_string(id)) return id;
  }
  return std::nullopt;
}

double SimEstimate::z_score(double reference) const {
  const double diff = mean - reference;
  if (std_error > 0.0) return diff / std_error;
  if (diff == 0.0) return 0.0;
  return diff > 0.0 ? kInf : -kInf;
}

double default_horizon(double q) { return std::log(1e4) / q; }

SimEstimate simulate_value(const LevyModel& model, const ControlParams& params,
                           const SimConfig& config) {
  params.validate(model);
  if (!(config.level_b >= 0.0)) throw ConfigError("level_b must be >= 0");
  const double horizon = resolve_horizon(config, params.q);
  const PathEngine engine(model, params.q, params.p, horizon, config.euler_step, config.clock);
  PathSpec spec;
  spec.level = config.level_b;
  spec.dividend_rate = params.K;
  spec.parisian = true;
  const double bias = std::exp(-params.q * horizon) * params.K / params.q;
  return run_paths(config, horizon, bias, [&](Stream& rng) {
    return engine.run(spec, config.start_x, rng).dividends;
  });
}

IdentityEstimate estimate_identity(const LevyModel& model, const ControlParams& params,
                                   const SimConfig& config, Identity which) {
  params.validate(model);
  const double x = config.start_x;
  const double b = config.level_b;
  if (which != Identity::down_ever) {
    if (!(b > 0.0)) throw DomainError("identity: upper level b must be positive");
    if (x > b) throw DomainError("identity: start x must not exceed the upper level b");
  }
  const ScaleSet scales(model, params.q, params.p, params.K);
  const double q = params.q;

  PathSpec spec;
  double analytic = 0.0;
  switch (which) {
    case Identity::up_classical:
      spec.upper_stop = b;
      spec.lower_stop = 0.0;
      analytic = scales.W(x) / scales.W(b);
      break;
    case Identity::up_parisian:
      spec.upper_stop = b;
      spec.parisian = true;
      analytic = scales.Zqp(x) / scales.Zqp(b);
      break;
    case Identity::down_before_up:
      spec.upper_stop = b;
      spec.lower_stop = 0.0;
      analytic = scales.Z(x) - scales.Z(b) / scales.W(b) * scales.W(x);
      break;
    case Identity::down_ever:
      spec.lower_stop = 0.0;
      analytic = scales.Z(x) - q / scales.phi_q() * scales.W(x);
      break;
  }
  const PathEnd wanted =
      (which == Identity::up_classical || which == Identity::up_parisian) ? PathEnd::hit_upper
                                                                           : PathEnd::hit_lower;
  const double horizon = resolve_horizon(config, q);
  const PathEngine engine(model, q, params.p, horizon, config.euler_step, config.clock);
  IdentityEstimate out;
  out.which = which;
  out.analytic = analytic;
  out.estimate = run_paths(config, horizon, std::exp(-q * horizon), [&](Stream& rng) {
    const PathOutcome o = engine.run(spec, x, rng);
    return o.end == wanted ? std::exp(-q * o.time) : 0.0;
  });
  out.z_score = out.estimate.z_score(analytic);
  return out;
}

AppendixReport verify_appendix_identity(const LevyModel& model, const ControlParams& params,
                                        const SimConfig& config, double b, double x) {
  params.validate(model);
  if (!(b >= 0.0)) throw DomainError("appendix identity: b must be >= 0");
  if (x < b) throw DomainError("appendix identity: x must be >= b");
  const ParisianProblem problem(model, params);
  const ScaleSet& s = problem.scales();
  const double q = params.q;
  const double p = params.p;
  const double K = params.K;
  const double phi_k = s.phi_K();
  const double phi_pq = s.phi_pq();

  AppendixReport r;
  // Closed form: Z_{q,p}(x) + K int_b^x WW(x-z) Z'(z) dz - (K/Phi_K) WW(x-b) h_p(b).
  const double conv = s.w_refracted().convolve(s.z_qp_prime().shifted(b))(x - b);
  r.second_term_closed = K / phi_k * s.WW(x - b) * problem.h_p(b);
  r.rhs_symbolic = s.Zqp(x) + K * conv - r.second_term_closed;

  // w_b(x; -y) grows like e^{Phi(q) y}, so the first integrand decays at rate
  // Phi(p+q) - Phi(q); truncate where it is below 1e-20 of its start.
  const double decay = phi_pq - s.phi_q();
  const double y_max = std::log(1e20) / decay;
  const double first = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double y) { return std::exp(-phi_pq * y) * s.w_aux(b, x, -y); }, 0.0, y_max, 20, 1e-14);
  boost::math::quadrature::exp_sinh<double> integrator;
  // Far in the tail the two factors overflow and underflow separately while
  // their product decays; count such samples as 0.
  auto finite = [](double v) { return std::isfinite(v) ? v : 0.0; };
  const double laplace = integrator.integrate(
      [&](double z) { return finite(std::exp(-phi_k * z) * s.Zqp_prime(b + z)); }, 0.0,
      std::numeric_limits<double>::infinity(), 1e-14);
  r.second_term_quadrature = K * s.WW(x - b) * laplace;
  r.rhs_quadrature = p * first - r.second_term_quadrature;

  // Y = X - K t run until it first goes below b.
  const LevyModel y_model = refract(model, K);
  const double horizon = resolve_horizon(config, q);
  const PathEngine engine(y_model, q, p, horizon, config.euler_step, config.clock);
  PathSpec spec;
  spec.lower_stop = b;
  r.lhs = run_paths(config, horizon, std::exp(-q * horizon) * s.Zqp(b), [&](Stream& rng) {
    const PathOutcome o = engine.run(spec, x, rng);
    return o.end == PathEnd::hit_lower ? std::exp(-q * o.time) * s.Zqp(o.position) : 0.0;
  });
  r.z_score = r.lhs.z_score(r.rhs_symbolic);
  return r;
}

}  // namespace parisian

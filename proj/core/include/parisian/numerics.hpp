#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>

#include <boost/math/tools/roots.hpp>

#include "parisian/errors.hpp"

namespace parisian::numerics {

// expm1(d*x)/d, continuous through d = 0.
inline double expm1_ratio(double d, double x) {
  if (d == 0.0) return x;
  return std::expm1(d * x) / d;
}

// Bracketed root of a continuous function with a sign change on [lo, hi].
// Boost's TOMS 748 does the work; the result is accurate to a few ulps.
template <typename F>
double find_root(F&& f, double lo, double hi, const std::string& what = "root") {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw ConsistencyError(what + ": no sign change on [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]");
  }
  std::uintmax_t max_iter = 500;
  boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 2);
  auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, max_iter);
  return a + 0.5 * (b - a);
}

// Golden-section search for the minimiser of a unimodal function on [lo, hi].
// `increment(a, b)` must return f(a) - f(b); passing differences instead of
// values lets the caller evaluate them without cancellation.
template <typename Increment>
double golden_section_minimize(Increment&& increment, double lo, double hi, double x_tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  while (b - a > x_tol) {
    if (increment(c, d) < 0.0) {
      b = d;
    } else {
      a = c;
    }
    c = b - inv_phi * (b - a);
    d = a + inv_phi * (b - a);
    if (!(c < d)) break;
  }
  return a + 0.5 * (b - a);
}

// Pairwise (cascade) summation; the result does not depend on how the input
// was produced, only on its order.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace parisian::numerics

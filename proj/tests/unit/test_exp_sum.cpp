#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "parisian/exp_sum.hpp"

using namespace parisian;
using doctest::Approx;

TEST_CASE("construction merges equal rates and drops cancellations") {
  ExpSum s({{2.0, 1.0, 0}, {3.0, 1.0, 0}, {1.0, -2.0, 0}});
  CHECK(s.terms().size() == 2);
  CHECK(s.coefficient(1.0) == Approx(5.0));
  ExpSum c({{1.0, 3.0, 0}, {-1.0, 3.0, 0}, {0.5, 0.0, 0}});
  CHECK(c.terms().size() == 1);
  CHECK(c.max_rate() == 0.0);
  CHECK(ExpSum().max_rate() == -std::numeric_limits<double>::infinity());
}

TEST_CASE("evaluation, derivative and antiderivative") {
  const ExpSum f({{2.0, 0.5, 0}, {-1.0, -1.5, 0}, {0.3, 0.0, 0}});
  auto ref = [](double x) { return 2.0 * std::exp(0.5 * x) - std::exp(-1.5 * x) + 0.3; };
  for (double x : {-1.0, 0.0, 0.7, 3.0}) {
    CHECK(f(x) == Approx(ref(x)).epsilon(1e-15));
    CHECK(f.derivative()(x) == Approx(std::exp(0.5 * x) + 1.5 * std::exp(-1.5 * x)).epsilon(1e-14));
    CHECK(f.antiderivative()(x) == Approx(oracle::integrate(ref, 0.0, x)).epsilon(1e-12));
  }
  CHECK(f.antiderivative()(0.0) == 0.0);
  // increment is exact for nearby points
  const double x0 = 2.0, dx = 1e-9;
  CHECK(f.increment(x0 + dx, x0) == Approx(f.derivative()(x0) * dx).epsilon(1e-7));
}

TEST_CASE("powers: derivative, antiderivative, laplace") {
  const ExpSum g({{1.0, -1.0, 1}});  // x e^{-x}
  CHECK(g(2.0) == Approx(2.0 * std::exp(-2.0)));
  CHECK(g.derivative()(2.0) == Approx(-std::exp(-2.0)));
  CHECK(g.antiderivative()(3.0) == Approx(1.0 - 4.0 * std::exp(-3.0)).epsilon(1e-14));
  CHECK(g.laplace(1.0) == Approx(0.25));  // 1/(s+1)^2
  const ExpSum h({{1.0, 0.0, 1}});        // x
  CHECK(h.antiderivative()(3.0) == Approx(4.5));
}

TEST_CASE("shift and scale") {
  const ExpSum f({{2.0, 0.5, 0}, {1.0, -1.0, 2}});
  for (double x : {0.0, 1.3}) {
    CHECK(f.shifted(0.7)(x) == Approx(f(x + 0.7)).epsilon(1e-14));
    CHECK(f.scaled(-3.0)(x) == Approx(-3.0 * f(x)).epsilon(1e-15));
  }
}

TEST_CASE("convolution against quadrature") {
  const ExpSum f({{1.5, 0.4, 0}, {-0.5, -2.0, 0}});
  const ExpSum g({{0.7, -1.0, 0}, {2.0, 0.4, 0}});
  const ExpSum fg = f.convolve(g);
  for (double x : {0.0, 0.5, 2.0, 6.0}) {
    const double q = oracle::integrate([&](double y) { return f(x - y) * g(y); }, 0.0, x);
    CHECK(fg(x) == Approx(q).epsilon(1e-12));
  }
  // coinciding rate 0.4 produced a power-1 term
  bool has_power = false;
  for (const auto& t : fg.terms()) has_power = has_power || t.power == 1;
  CHECK(has_power);
  CHECK_THROWS(fg.convolve(f));
}

TEST_CASE("laplace transform against quadrature") {
  const ExpSum f({{1.5, 0.4, 0}, {-0.5, -2.0, 0}});
  const double s = 1.3;
  const double q = oracle::integrate_to_inf([&](double y) { return std::exp(-s * y) * f(y); }, 0.0, 10.0);
  CHECK(f.laplace(s) == Approx(q).epsilon(1e-13));
  CHECK_THROWS(f.laplace(0.4));
}

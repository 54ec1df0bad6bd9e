#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "parisian/errors.hpp"
#include "parisian/levy_model.hpp"

using namespace parisian;
using doctest::Approx;

TEST_CASE("laplace exponent values") {
  const auto m1 = oracle::m1();
  const auto m3 = oracle::m3();
  CHECK(laplace_exponent(m1, 0.0) == 0.0);
  CHECK(laplace_exponent(m3, 0.0) == 0.0);
  CHECK(laplace_exponent(m3, 1.0) == Approx(1.0).epsilon(1e-15));
  CHECK(laplace_exponent(m1, 2.0 / 3.0) == Approx(0.6).epsilon(1e-14));
  CHECK_THROWS_AS(laplace_exponent(m1, -0.1), DomainError);
}

TEST_CASE("right inverse against the quadratic formula") {
  const auto m1 = oracle::m1();
  CHECK(phi(oracle::m3(), 1.0) == Approx(1.0).epsilon(1e-14));
  CHECK(phi(m1, 0.6) == Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(phi(m1, 0.1) == Approx(0.1572599).epsilon(1e-7));
  for (double q : {0.01, 0.1, 0.5, 1.0, 3.0, 10.0}) {
    CHECK(phi(m1, q) == Approx(oracle::cp_roots(1.5, 1.0, 1.0, q).hi).epsilon(1e-13));
  }
  // Positive drift: Phi(0) = 0.
  CHECK(phi(m1, 0.0) == 0.0);
  // Negative mean: Phi(0) > 0.
  const auto drifting_down = LevyModel::bounded_variation(0.5, {{1.0, 1.0}});
  CHECK(phi(drifting_down, 0.0) == Approx(1.0).epsilon(1e-13));
}

TEST_CASE("refracted model") {
  const auto m1 = oracle::m1();
  const auto y = refract(m1, 0.5);
  CHECK(y.drift() == Approx(1.0));
  CHECK(y.jumps().size() == 1);
  CHECK(phi(y, 0.1) == Approx(0.3701562).epsilon(1e-7));
  CHECK(phi(refract(m1, 1.4), 0.1) == Approx((10.0 + std::sqrt(104.0)) / 2.0).epsilon(1e-13));
  CHECK_THROWS_AS(refract(m1, 1.5), AdmissibilityError);
  CHECK_THROWS_AS(refract(m1, 2.0), AdmissibilityError);
  // No drift restriction with a Gaussian part.
  CHECK(refract(oracle::m3(), 5.0).drift() == Approx(-5.0));
}

TEST_CASE("W at zero") {
  CHECK(w_at_zero(oracle::m1()) == Approx(2.0 / 3.0));
  CHECK(w_at_zero(oracle::m3()) == 0.0);
  CHECK(w_at_zero(refract(oracle::m1(), 0.5)) == Approx(1.0));
}

TEST_CASE("model invariants are enforced") {
  CHECK_THROWS(LevyModel::bounded_variation(0.0, {{1.0, 1.0}}));
  CHECK_THROWS(LevyModel::bounded_variation(1.0, {{-1.0, 1.0}}));
  CHECK_THROWS(LevyModel::bounded_variation(1.0, {{1.0, 0.0}}));
  CHECK_THROWS(LevyModel::bounded_variation(1.0, {{1.0, 2.0}, {0.5, 2.0}}));
  CHECK_THROWS(LevyModel::with_diffusion(-1.0, 0.0));
  CHECK(oracle::m1().variation() == VariationKind::bounded);
  CHECK(oracle::m3().variation() == VariationKind::unbounded);
}

TEST_CASE("control parameter admissibility") {
  const auto m1 = oracle::m1();
  auto check = [](const LevyModel& m, double q, double p, double K) {
    ControlParams params{q, p, K};
    params.validate(m);
  };
  CHECK_NOTHROW(check(m1, 0.1, 0.5, 0.5));
  CHECK_THROWS_AS(check(m1, 0.0, 0.5, 0.5), AdmissibilityError);
  CHECK_THROWS_AS(check(m1, 0.1, 0.0, 0.5), AdmissibilityError);
  CHECK_THROWS_AS(check(m1, 0.1, 0.5, 0.0), AdmissibilityError);
  CHECK_THROWS_AS(check(m1, 0.1, 0.5, 1.5), AdmissibilityError);
  CHECK_NOTHROW(check(oracle::m3(), 0.1, 0.5, 100.0));
}

TEST_CASE("psi properties on a grid") {
  std::vector<LevyModel> models{
      oracle::m1(), oracle::m3(),
      LevyModel::bounded_variation(2.0, {{0.5, 0.7}, {0.3, 3.0}}),
      LevyModel::with_diffusion(0.8, 0.3, {{1.2, 2.0}, {0.4, 0.5}}),
      LevyModel::with_diffusion(1.0, -0.5, {{0.7, 1.5}})};
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 20.0);
  for (const auto& m : models) {
    CAPTURE(m.describe());
    double prev = -1.0;
    for (double q : {0.01, 0.05, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
      const double f = phi(m, q);
      CHECK(std::abs(laplace_exponent(m, f) - q) <= 1e-12 * std::max(1.0, q));
      CHECK(f > prev);
      CHECK(f > phi(m, 0.0));
      CHECK(phi(refract(m, 0.05), q) > f);
      prev = f;
    }
    for (int i = 0; i < 200; ++i) {
      const double a = u(rng), b = u(rng);
      const double mid = laplace_exponent(m, 0.5 * (a + b));
      CHECK(mid <= 0.5 * (laplace_exponent(m, a) + laplace_exponent(m, b)) + 1e-12 * (1.0 + std::abs(mid)));
    }
  }
}

TEST_CASE("roots interlace with the poles") {
  const auto m = LevyModel::with_diffusion(0.8, 0.3, {{1.2, 2.0}, {0.4, 0.5}});
  const auto r = m.roots(0.7);
  REQUIRE(r.size() == 4);
  CHECK(r[0] < -2.0);
  CHECK(r[1] > -2.0);
  CHECK(r[1] < -0.5);
  CHECK(r[2] > -0.5);
  CHECK(r[3] == Approx(phi(m, 0.7)).epsilon(1e-14));
  for (double t : r) CHECK(std::abs(m.psi(t) - 0.7) < 1e-10);
  CHECK(oracle::m1().roots(0.1).size() == 2);
}

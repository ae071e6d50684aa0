#include <cmath>
#include <limits>

#include "doctest.h"
#include "gldlmom/error.hpp"
#include "gldlmom/nelder_mead.hpp"

using namespace gldlmom;

TEST_CASE("minimizes a shifted quadratic") {
  const auto f = [](const Vec2& x) { return (x[0] - 3.0) * (x[0] - 3.0) + 10.0 * (x[1] + 1.0) * (x[1] + 1.0); };
  const auto r = nelder_mead(f, {0.0, 0.0}, {.tol = 1e-20});
  CHECK(r.converged);
  CHECK(r.point[0] == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(r.point[1] == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(r.value < 1e-12);
}

TEST_CASE("follows the Rosenbrock valley") {
  const auto f = [](const Vec2& x) {
    return 100.0 * (x[1] - x[0] * x[0]) * (x[1] - x[0] * x[0]) + (1.0 - x[0]) * (1.0 - x[0]);
  };
  const auto r = nelder_mead(f, {-1.2, 1.0}, {.tol = 1e-24, .max_iter = 5000});
  CHECK(r.converged);
  CHECK(r.point[0] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(r.point[1] == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("NaN is treated as an infinite value") {
  const auto f = [](const Vec2& x) {
    if (x[0] < 0.0) return std::numeric_limits<double>::quiet_NaN();
    return (x[0] - 1.0) * (x[0] - 1.0) + x[1] * x[1];
  };
  const auto r = nelder_mead(f, {0.5, 0.5}, {.tol = 1e-20});
  CHECK(r.point[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::isfinite(r.value));
}

TEST_CASE("iteration cap reports non-convergence") {
  const auto f = [](const Vec2& x) { return x[0] * x[0] + x[1] * x[1]; };
  const auto r = nelder_mead(f, {5.0, 5.0}, {.tol = 1e-300, .max_iter = 10});
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 10);
}

TEST_CASE("coefficients are checked") {
  const auto f = [](const Vec2& x) { return x[0] * x[0] + x[1] * x[1]; };
  CHECK_THROWS_AS(nelder_mead(f, {0.0, 0.0}, {.expansion = 0.5}), Error);
  CHECK_THROWS_AS(nelder_mead(f, {0.0, 0.0}, {.contraction = 1.0}), Error);
  CHECK_THROWS_AS(nelder_mead(f, {0.0, 0.0}, {.tol = 0.0}), Error);
  CHECK_THROWS_AS(nelder_mead(f, {std::nan(""), 0.0}), Error);
}

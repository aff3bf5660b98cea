#include <cmath>
#include <limits>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "boxjenkins/nelder_mead.hpp"

using namespace boxjenkins;
using Catch::Approx;

TEST_CASE("nelder-mead minimises a quadratic", "[optimizer]") {
  auto f = [](const std::vector<double>& x) { return (x[0] - 1.0) * (x[0] - 1.0) + 4.0 * (x[1] + 2.0) * (x[1] + 2.0); };
  const auto r = nelder_mead(f, {0.0, 0.0});
  CHECK(r.converged);
  CHECK(r.x[0] == Approx(1.0).margin(1e-6));
  CHECK(r.x[1] == Approx(-2.0).margin(1e-6));
}

TEST_CASE("nelder-mead solves Rosenbrock", "[optimizer]") {
  auto f = [](const std::vector<double>& x) {
    return 100.0 * (x[1] - x[0] * x[0]) * (x[1] - x[0] * x[0]) + (1.0 - x[0]) * (1.0 - x[0]);
  };
  NelderMeadOptions opts;
  opts.max_evaluations = 20000;
  const auto r = nelder_mead(f, {-1.2, 1.0}, opts);
  CHECK(r.x[0] == Approx(1.0).margin(1e-4));
  CHECK(r.x[1] == Approx(1.0).margin(1e-4));
}

TEST_CASE("nelder-mead respects an infinite penalty", "[optimizer]") {
  // Unconstrained minimum at 2 lies outside the feasible interval (-1, 1).
  auto f = [](const std::vector<double>& x) {
    if (std::abs(x[0]) >= 1.0) return std::numeric_limits<double>::infinity();
    return (x[0] - 2.0) * (x[0] - 2.0);
  };
  const auto r = nelder_mead(f, {0.0});
  CHECK(r.x[0] < 1.0);
  CHECK(r.x[0] == Approx(1.0).margin(1e-6));
}

TEST_CASE("nelder-mead stops at the evaluation cap", "[optimizer]") {
  auto f = [](const std::vector<double>& x) { return std::abs(x[0]) + std::abs(x[1]) + std::abs(x[2]); };
  NelderMeadOptions opts;
  opts.max_evaluations = 10;
  const auto r = nelder_mead(f, {5.0, 5.0, 5.0}, opts);
  CHECK_FALSE(r.converged);
  CHECK(r.evaluations <= 12);
}

TEST_CASE("nelder-mead with no parameters evaluates once", "[optimizer]") {
  const auto r = nelder_mead([](const std::vector<double>&) { return 3.0; }, {});
  CHECK(r.value == 3.0);
  CHECK(r.converged);
}

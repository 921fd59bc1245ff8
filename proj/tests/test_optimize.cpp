#include <doctest.h>

#include <cmath>
#include <limits>

#include "qlrt/errors.hpp"
#include "qlrt/optimize.hpp"

using namespace qlrt;

TEST_CASE("one-dimensional quadratic maximum") {
  OptProblem p;
  p.box = {Interval{0.0, 1.0}};
  p.objective = [](const std::vector<double>& x) {
    return -(x[0] - 0.3) * (x[0] - 0.3);
  };
  const OptResult r = maximize(p);
  CHECK(r.argmax[0] == doctest::Approx(0.3).epsilon(1e-6));
  CHECK(r.value == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("pinned coordinates never move") {
  OptProblem p;
  p.box = {Interval{-1.0, 1.0}, Interval{-1.0, 1.0}};
  p.pinned = {0.0, std::nullopt};
  p.objective = [](const std::vector<double>& x) {
    return -x[0] * x[0] - (x[1] - 0.5) * (x[1] - 0.5);
  };
  const OptResult r = maximize(p);
  CHECK(r.argmax[0] == 0.0);
  CHECK(r.argmax[1] == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("negated Rosenbrock over the standard box") {
  OptProblem p;
  p.box = {Interval{-2.0, 2.0}, Interval{-2.0, 2.0}};
  p.objective = [](const std::vector<double>& x) {
    const double a = 1.0 - x[0];
    const double b = x[1] - x[0] * x[0];
    return -(a * a + 100.0 * b * b);
  };
  const OptResult r = maximize(p);
  CHECK(r.argmax[0] == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(r.argmax[1] == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("fully pinned problems return the pinned point exactly") {
  OptProblem p;
  p.box = {Interval{-1.0, 1.0}, Interval{-1.0, 1.0}};
  p.pinned = {0.25, -0.75};
  p.objective = [](const std::vector<double>& x) { return x[0] + x[1]; };
  const OptResult r = maximize(p);
  CHECK(r.argmax == std::vector<double>{0.25, -0.75});
  CHECK(r.value == -0.5);
  CHECK(r.evaluations == 1);
}

TEST_CASE("the result dominates every grid-scan point") {
  OptProblem p;
  p.box = {Interval{-3.0, 3.0}, Interval{-3.0, 3.0}};
  p.objective = [](const std::vector<double>& x) {
    // rippled bowl with several local maxima
    return std::sin(3.0 * x[0]) * std::cos(2.0 * x[1]) -
           0.1 * (x[0] * x[0] + x[1] * x[1]);
  };
  const OptResult r = maximize(p);
  for (int i = 0; i < 9; ++i) {
    for (int j = 0; j < 9; ++j) {
      const std::vector<double> z{-3.0 + 6.0 * i / 8.0, -3.0 + 6.0 * j / 8.0};
      CHECK(r.value >= p.objective(z));
    }
  }
}

TEST_CASE("constrained never beats unconstrained") {
  OptProblem free_p;
  free_p.box = {Interval{-2.0, 2.0}, Interval{-2.0, 2.0}};
  free_p.objective = [](const std::vector<double>& x) {
    return -(x[0] - 0.7) * (x[0] - 0.7) - (x[1] + 0.4) * (x[1] + 0.4);
  };
  OptProblem pinned_p = free_p;
  pinned_p.pinned = {0.0, std::nullopt};
  const double full = maximize(free_p).value;
  const double constrained = maximize(pinned_p).value;
  CHECK(constrained <= full + 1e-9);
}

TEST_CASE("an objective that is minus infinity everywhere fails loudly") {
  OptProblem p;
  p.box = {Interval{0.0, 1.0}};
  p.objective = [](const std::vector<double>&) {
    return -std::numeric_limits<double>::infinity();
  };
  CHECK_THROWS_AS(maximize(p), NumericError);
}

TEST_CASE("partial infeasibility is navigated") {
  OptProblem p;
  p.box = {Interval{-1.0, 1.0}};
  p.objective = [](const std::vector<double>& x) {
    if (x[0] < 0.1) return -std::numeric_limits<double>::infinity();
    return -(x[0] - 0.6) * (x[0] - 0.6);
  };
  const OptResult r = maximize(p);
  CHECK(r.argmax[0] == doctest::Approx(0.6).epsilon(1e-6));
}

TEST_CASE("extra starts join the refinement") {
  OptProblem p;
  p.box = {Interval{-10.0, 10.0}};
  // two widely separated peaks; the sharper one hides between grid points
  p.objective = [](const std::vector<double>& x) {
    const double wide = std::exp(-0.5 * (x[0] + 5.0) * (x[0] + 5.0));
    const double sharp =
        2.0 * std::exp(-3000.0 * (x[0] - 1.37) * (x[0] - 1.37));
    return wide + sharp;
  };
  OptProblem seeded = p;
  seeded.extra_starts = {{1.3}};
  const OptResult r = maximize(seeded);
  CHECK(r.argmax[0] == doctest::Approx(1.37).epsilon(1e-4));
  CHECK(r.value > 1.9);
}

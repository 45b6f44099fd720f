#include <cmath>

#include "blmac/errors.hpp"
#include "blmac/rootfind.hpp"
#include "doctest.h"

using namespace blmac;

TEST_CASE("bisection finds the root of a smooth function") {
  const double root = bisect_root([](double x) { return x * x - 4.0; }, 0.0, 10.0, 1e-12);
  CHECK(root == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("brent finds the root of a smooth function") {
  const double root = brent_root([](double x) { return x * x - 4.0; }, 0.0, 10.0, 1e-12);
  CHECK(root == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("brent handles a flat-then-steep shape") {
  // This shape mirrors the power constraint in beta: identically zero below
  // the lowest floor, then strictly increasing.
  auto f = [](double x) { return x < 1.0 ? -3.0 : (x - 1.0) * (x - 1.0) * 10.0 - 3.0; };
  const double root = brent_root(f, 0.0, 50.0, 1e-12);
  CHECK(root == doctest::Approx(1.0 + std::sqrt(0.3)).epsilon(1e-9));
}

TEST_CASE("solvers respect the relative tolerance") {
  const double target = std::exp(1.0);
  auto f = [&](double x) { return x - target; };
  for (double tol : {1e-4, 1e-8, 1e-12}) {
    CHECK(std::abs(bisect_root(f, 0.0, 100.0, tol) - target) <= 2.0 * tol * 100.0);
    CHECK(std::abs(brent_root(f, 0.0, 100.0, tol) - target) <= 2.0 * tol * 100.0);
  }
}

TEST_CASE("an invalid bracket is rejected") {
  auto f = [](double x) { return x + 10.0; };
  CHECK_THROWS_AS(bisect_root(f, 0.0, 1.0, 1e-9), NonConvergence);
  CHECK_THROWS_AS(brent_root(f, 0.0, 1.0, 1e-9), NonConvergence);
}

TEST_CASE("bracket expansion grows until the sign changes") {
  auto f = [](double x) { return x - 37.0; };
  const Bracket b = expand_bracket(f, 1.0, 2.0);
  CHECK(f(b.lo) <= 0.0);
  CHECK(f(b.hi) >= 0.0);
  CHECK(b.hi >= 37.0);

  auto g = [](double x) { return x - 0.01; };
  const Bracket c = expand_bracket(g, 1.0, 2.0);
  CHECK(g(c.lo) <= 0.0);
  CHECK(c.lo <= 0.01);
}

TEST_CASE("expanded brackets feed straight into the solvers") {
  auto f = [](double x) { return std::log(x) - 3.0; };
  const Bracket b = expand_bracket(f, 1.0, 2.0);
  const double root = brent_root(f, b.lo, b.hi, 1e-12);
  CHECK(root == doctest::Approx(std::exp(3.0)).epsilon(1e-9));
}

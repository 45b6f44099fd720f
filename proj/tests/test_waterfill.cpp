#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "blmac/channel.hpp"
#include "blmac/errors.hpp"
#include "blmac/waterfill.hpp"
#include "doctest.h"

using namespace blmac;

namespace {

// Independent oracle: solves sum_i max(0, beta - nu_i) = budget by bisection
// on beta, ignoring the prefix-scan structure of the production code.
double oracle_water_level(const std::vector<double>& noise, double budget) {
  const double top = *std::max_element(noise.begin(), noise.end());
  double lo = *std::min_element(noise.begin(), noise.end());
  double hi = top + budget;
  auto spent = [&](double beta) {
    double total = 0.0;
    for (double nu : noise) total += std::max(0.0, beta - nu);
    return total;
  };
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (spent(mid) < budget)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

WaterfillProblem make_problem(const std::vector<double>& noise, double budget) {
  WaterfillProblem problem;
  for (std::size_t i = 0; i < noise.size(); ++i)
    problem.candidates.push_back({static_cast<int>(i), noise[i]});
  problem.budget = budget;
  return problem;
}

}  // namespace

TEST_CASE("two channels split a small budget around the lower floor") {
  const WaterfillSolution sol = water_fill(make_problem({1.0, 2.0}, 2.0));
  CHECK(sol.water_level == doctest::Approx(2.5));
  CHECK(sol.powers[0] == doctest::Approx(1.5));
  CHECK(sol.powers[1] == doctest::Approx(0.5));
  CHECK(sol.total_power() == doctest::Approx(2.0));
}

TEST_CASE("a deep channel is left dry when the budget is small") {
  const WaterfillSolution sol = water_fill(make_problem({0.5, 10.0}, 0.5));
  CHECK(sol.water_level == doctest::Approx(1.0));
  CHECK(sol.powers[0] == doctest::Approx(0.5));
  CHECK(sol.powers[1] == 0.0);
  CHECK(sol.support() == std::vector<int>{0});
}

TEST_CASE("a single channel absorbs the whole budget") {
  const WaterfillSolution sol = water_fill(make_problem({3.0}, 1.25));
  CHECK(sol.water_level == doctest::Approx(4.25));
  CHECK(sol.powers[0] == doctest::Approx(1.25));
}

TEST_CASE("solutions keep the candidate order of the problem") {
  WaterfillProblem problem;
  problem.candidates = {{7, 2.0}, {3, 1.0}, {11, 4.0}};
  problem.budget = 2.0;
  const WaterfillSolution sol = water_fill(problem);
  CHECK(sol.channel_ids == std::vector<int>{7, 3, 11});
  // Level (2 + 1 + 2) / 2 = 2.5 covers floors 1 and 2 but not 4.
  CHECK(sol.water_level == doctest::Approx(2.5));
  CHECK(sol.powers[0] == doctest::Approx(0.5));
  CHECK(sol.powers[1] == doctest::Approx(1.5));
  CHECK(sol.powers[2] == 0.0);
  CHECK(sol.support() == std::vector<int>{3, 7});
}

TEST_CASE("prefix-scan solver agrees with the bisection oracle") {
  std::mt19937_64 rng = derive_trial_seed(2024, 0);
  for (int trial = 0; trial < 500; ++trial) {
    const int m = 1 + static_cast<int>(uniform_unit(rng) * 8);
    std::vector<double> noise(m);
    for (double& nu : noise) nu = 0.1 + 9.9 * uniform_unit(rng);
    const double budget = 0.1 + 9.9 * uniform_unit(rng);
    const WaterfillSolution sol = water_fill(make_problem(noise, budget));
    const double beta = oracle_water_level(noise, budget);
    CHECK(sol.water_level == doctest::Approx(beta).epsilon(1e-9));
    for (int i = 0; i < m; ++i)
      CHECK(sol.powers[i] ==
            doctest::Approx(std::max(0.0, beta - noise[i])).scale(budget).epsilon(1e-8));
    CHECK(sol.total_power() == doctest::Approx(budget).epsilon(1e-12));
  }
}

TEST_CASE("water level rises with the budget") {
  const std::vector<double> noise = {0.4, 1.1, 2.7, 5.0};
  double previous = 0.0;
  for (double budget : {0.1, 0.5, 1.0, 2.0, 5.0, 20.0}) {
    const WaterfillSolution sol = water_fill(make_problem(noise, budget));
    CHECK(sol.water_level > previous);
    previous = sol.water_level;
  }
}

TEST_CASE("the two shallowest channels beat any other pair") {
  // With a shared budget and equal-size subsets, water-filling over the
  // channels with the lowest floors yields the largest sum rate; this is the
  // property the cap-selection rule relies on.
  std::mt19937_64 rng = derive_trial_seed(5150, 0);
  auto subset_rate = [](const std::vector<double>& noise, double budget) {
    const WaterfillSolution sol = water_fill(make_problem(noise, budget));
    double total = 0.0;
    for (std::size_t i = 0; i < noise.size(); ++i)
      total += std::log2(1.0 + sol.powers[i] / noise[i]);
    return total;
  };
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> noise(4);
    for (double& nu : noise) nu = 0.2 + 5.0 * uniform_unit(rng);
    const double budget = 0.5 + 4.0 * uniform_unit(rng);

    std::vector<double> sorted = noise;
    std::sort(sorted.begin(), sorted.end());
    const double best = subset_rate({sorted[0], sorted[1]}, budget);
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = a + 1; b < 4; ++b)
        CHECK(best >= subset_rate({noise[a], noise[b]}, budget) - 1e-9);
  }
}

TEST_CASE("support filters by minimum power and sorts by id") {
  WaterfillProblem problem;
  problem.candidates = {{5, 1.0}, {2, 1.0}, {9, 100.0}};
  problem.budget = 4.0;
  const WaterfillSolution sol = water_fill(problem);
  CHECK(sol.support() == std::vector<int>{2, 5});
  CHECK(sol.support(10.0).empty());
}

TEST_CASE("malformed problems are rejected") {
  CHECK_THROWS_AS(water_fill({{}, 1.0}), EmptyCandidateSet);
  CHECK_THROWS_AS(water_fill(make_problem({1.0}, 0.0)), NonpositiveBudget);
  CHECK_THROWS_AS(water_fill(make_problem({1.0}, -2.0)), NonpositiveBudget);
  CHECK_THROWS_AS(water_fill(make_problem({-1.0}, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(water_fill(make_problem({0.0}, 1.0)), std::invalid_argument);
  WaterfillProblem duplicate;
  duplicate.candidates = {{1, 0.5}, {1, 0.7}};
  duplicate.budget = 1.0;
  CHECK_THROWS_AS(water_fill(duplicate), std::invalid_argument);
}

TEST_CASE("effective noise divides interference by gain") {
  CHECK(effective_noise(2.0, 4.0).value() == doctest::Approx(0.5));
  CHECK(!effective_noise(2.0, 0.0).has_value());
  CHECK_THROWS_AS(effective_noise(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(effective_noise(1.0, -1.0), std::invalid_argument);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "agenthub/rlmath/rlmath.hpp"

using namespace agenthub::rlmath;

TEST_CASE("shaped_reward formula and boundaries") {
  CHECK(shaped_reward(1, 0, 150, 0.1) == doctest::Approx(1.1));
  CHECK(shaped_reward(1, 150, 150, 0.1) == doctest::Approx(1.0));  // bonus vanishes at the cap
  CHECK(shaped_reward(1, 400, 150, 0.1) == doctest::Approx(1.0));  // and stays zero beyond
  CHECK(shaped_reward(0, 10, 150, 0.0) == doctest::Approx(0.0));
  CHECK(shaped_reward(1, 75, 150, 0.2) == doctest::Approx(1.1));
  CHECK_THROWS_AS(shaped_reward(1, -1, 150, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(shaped_reward(1, 0, 0, 0.1), std::invalid_argument);
}

TEST_CASE("shaped_reward bonus strictly decreases on [0, cap]") {
  double previous = shaped_reward(1, 0, 100, 0.5);
  for (int steps = 1; steps <= 100; ++steps) {
    double value = shaped_reward(1, steps, 100, 0.5);
    CHECK(value < previous);
    previous = value;
  }
}

TEST_CASE("group_advantages hand-checked values") {
  auto two = group_advantages({{1.0, 0.0}, 1e-8});
  CHECK(two[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(two[1] == doctest::Approx(-1.0).epsilon(1e-6));

  auto equal = group_advantages({{0.7, 0.7, 0.7}, 1e-8});
  for (double a : equal) CHECK(a == doctest::Approx(0.0));

  // mean 1, population std = sqrt(2/3)
  auto three = group_advantages({{2.0, 1.0, 0.0}, 1e-8});
  double expected = 1.0 / std::sqrt(2.0 / 3.0);
  CHECK(three[0] == doctest::Approx(expected).epsilon(1e-6));
  CHECK(three[1] == doctest::Approx(0.0));
  CHECK(three[2] == doctest::Approx(-expected).epsilon(1e-6));

  CHECK_THROWS_AS(group_advantages({{1.0}, 1e-8}), std::invalid_argument);
}

TEST_CASE("group_advantages outputs sum to ~0") {
  auto advantages = group_advantages({{3.0, -1.0, 0.5, 2.5, 0.0}, 1e-8});
  double total = std::accumulate(advantages.begin(), advantages.end(), 0.0);
  CHECK(std::abs(total) < 1e-9);
}

TEST_CASE("clipped_term arithmetic on both advantage signs") {
  CHECK(clipped_term(1.3, 1.0, 0.2) == doctest::Approx(1.2));   // min(1.3, 1.2)
  CHECK(clipped_term(1.0, 2.5, 0.2) == doctest::Approx(2.5));   // clip inactive at rho=1
  CHECK(clipped_term(1.0, -2.5, 0.2) == doctest::Approx(-2.5));
  CHECK(clipped_term(0.5, -1.0, 0.2) == doctest::Approx(-0.8));  // min(-0.5, -0.8)
  CHECK_THROWS_AS(clipped_term(0.0, 1.0, 0.2), std::invalid_argument);
  CHECK_THROWS_AS(clipped_term(1.0, 1.0, 1.5), std::invalid_argument);
}

TEST_CASE("kl_categorical closed forms and support checks") {
  CHECK(kl_categorical({0.3, 0.7}, {0.3, 0.7}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(kl_categorical({1.0, 0.0}, {0.5, 0.5}) == doctest::Approx(std::log(2.0)));
  CHECK_THROWS_AS(kl_categorical({1.0, 0.0}, {0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(kl_categorical({0.5, 0.5}, {0.5, 0.5, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(kl_categorical({0.6, 0.6}, {0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("grpo_objective combines the surrogate mean and the KL penalty") {
  CHECK(grpo_objective({{1.0, 1.0}}, 0.2, 0.0, 0.0) == doctest::Approx(1.0));
  CHECK(grpo_objective({{1.0, 1.0}}, 0.2, 1.0, 0.3) == doctest::Approx(0.7));
  CHECK(grpo_objective({{1.2, 0.0}, {0.8, 0.0}}, 0.2, 0.5, 0.4) == doctest::Approx(-0.2));
  CHECK(grpo_objective({{1.0, 2.0}, {1.0, 0.0}}, 0.2, 0.0, 0.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(grpo_objective({}, 0.2, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("the full property suite passes") {
  for (const auto& check : run_property_checks()) {
    INFO(check.name);
    CHECK(check.passed);
  }
}

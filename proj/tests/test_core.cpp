#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "agenthub/core/answer.hpp"
#include "agenthub/core/tokens.hpp"
#include "agenthub/sim/rng.hpp"

using namespace agenthub;

TEST_CASE("default counter basics") {
  CHECK(default_count_tokens("") == 0);
  CHECK(default_count_tokens(std::string(400, 'a')) == 100);
  CHECK(default_count_tokens("a") == 1);
  CHECK(default_count_tokens("abcd") == 1);
  CHECK(default_count_tokens("abcde") == 2);
}

TEST_CASE("default counter is monotone and near-additive under concatenation") {
  sim::Splitmix64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    std::string a(rng.next_below(40), 'x');
    std::string b(rng.next_below(40), 'y');
    int64_t ca = default_count_tokens(a);
    int64_t cb = default_count_tokens(b);
    int64_t cab = default_count_tokens(a + b);
    CHECK(cab >= ca);
    CHECK(cab >= cb);
    // Sub-token rounding loses at most one token against the part sum.
    CHECK(ca + cb - cab >= 0);
    CHECK(ca + cb - cab <= 1);
  }
}

TEST_CASE("part-sum additivity is exact on 4-byte-aligned parts") {
  sim::Splitmix64 rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    std::string a(4 * rng.next_below(20), 'x');
    std::string b(4 * rng.next_below(20), 'y');
    CHECK(default_count_tokens(a + b) == default_count_tokens(a) + default_count_tokens(b));
  }
}

TEST_CASE("context tokens sum the five parts") {
  WorkingContext ctx;
  ctx.system_preamble = std::string(40, 's');
  ctx.own_notes.push_back({{"a0", 1}, std::string(80, 'n'), 1});
  ctx.teammate_notes.push_back({{"a1", 1}, std::string(20, 't'), 2});
  ctx.readouts.push_back(std::string(12, 'r'));
  TrajectoryStep step;
  step.action.reasoning = "think";
  step.observation = "see";
  step.token_cost = step_token_cost(step.action, step.observation, default_token_counter());
  ctx.active.push_back(step);

  int64_t expected = 10 + 20 + 5 + 3 + step.token_cost;
  CHECK(context_tokens(ctx, default_token_counter()) == expected);
}

TEST_CASE("episode token_total equals the sum of its steps") {
  Episode episode;
  episode.owner = "a0";
  episode.ordinal = 1;
  for (int i = 0; i < 5; ++i) {
    TrajectoryStep step;
    step.index = i;
    step.action.reasoning = "reason " + std::to_string(i);
    step.action.tool_name = "search";
    step.action.tool_arguments = R"({"queries":["q"]})";
    step.observation = std::string(10 + i, 'o');
    step.token_cost = step_token_cost(step.action, step.observation, default_token_counter());
    episode.steps.push_back(step);
  }
  episode.token_total = episode_token_total(episode);

  int64_t recomputed = 0;
  for (const auto& step : episode.steps) {
    recomputed += step_token_cost(step.action, step.observation, default_token_counter());
  }
  CHECK(episode.token_total == recomputed);
}

TEST_CASE("truncate_to_tokens respects the budget") {
  std::string text(1000, 'z');
  std::string truncated = truncate_to_tokens(text, 10, default_token_counter());
  CHECK(default_count_tokens(truncated) <= 10);
  CHECK(truncated.size() == 40);
  CHECK(truncate_to_tokens("short", 100, default_token_counter()) == "short");
  CHECK(truncate_to_tokens("anything", 0, default_token_counter()) == "");
}

TEST_CASE("parse_final_answer handles the standard two-line format") {
  auto fa = parse_final_answer(
      "Exact Answer: Texas Prison System Central State Farm Main Building (Central Unit), Sugar "
      "Land, Texas\nConfidence: 65%");
  REQUIRE(fa.has_value());
  CHECK(fa->answer ==
        "Texas Prison System Central State Farm Main Building (Central Unit), Sugar Land, Texas");
  CHECK(fa->confidence == doctest::Approx(0.65));
  CHECK(fa->confidence_present);
}

TEST_CASE("parse_final_answer applies the missing-confidence default") {
  auto fa = parse_final_answer("Exact Answer: 1853");
  REQUIRE(fa.has_value());
  CHECK(fa->answer == "1853");
  CHECK(fa->confidence == doctest::Approx(0.5));
  CHECK_FALSE(fa->confidence_present);
}

TEST_CASE("parse_final_answer boundary and malformed inputs") {
  auto full = parse_final_answer("Exact Answer: X\nConfidence: 100%");
  REQUIRE(full.has_value());
  CHECK(full->confidence == doctest::Approx(1.0));

  CHECK_FALSE(parse_final_answer("I think the answer might be 42").has_value());

  auto lower = parse_final_answer("exact answer: y\nconfidence: 30%");
  REQUIRE(lower.has_value());
  CHECK(lower->answer == "y");
  CHECK(lower->confidence == doctest::Approx(0.3));

  // Out-of-range confidences clamp instead of breaking aggregation.
  auto clamped = parse_final_answer("Exact Answer: z\nConfidence: 250%");
  REQUIRE(clamped.has_value());
  CHECK(clamped->confidence == doctest::Approx(1.0));
}

TEST_CASE("parse after format is the identity on integer percents") {
  for (int percent = 0; percent <= 100; ++percent) {
    std::string text = format_final_answer("some answer", percent / 100.0);
    auto fa = parse_final_answer(text);
    REQUIRE(fa.has_value());
    CHECK(fa->answer == "some answer");
    CHECK(fa->confidence == doctest::Approx(percent / 100.0));
  }
}

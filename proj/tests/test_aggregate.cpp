#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "agenthub/aggregate/aggregate.hpp"
#include "agenthub/sim/rng.hpp"

using namespace agenthub;
using namespace agenthub::agg;

namespace {

CandidateAnswer cand(const std::string& id, const std::string& answer, double confidence,
                     int64_t tools = 1) {
  return CandidateAnswer{id, answer, confidence, tools};
}

// Independent oracles: each enumerates the rule's definition directly,
// without grouping machinery shared with the implementation.

CandidateAnswer bon_oracle(const std::vector<CandidateAnswer>& cs) {
  size_t best = 0;
  for (size_t i = 1; i < cs.size(); ++i) {
    if (cs[i].confidence > cs[best].confidence ||
        (cs[i].confidence == cs[best].confidence && cs[i].agent_id < cs[best].agent_id)) {
      best = i;
    }
  }
  return cs[best];
}

struct ClassStat {
  int count = 0;
  double weight = 0.0;
  double max_conf = 0.0;
  std::string min_id;
  std::string representative;
};

ClassStat class_stat_for(const std::vector<CandidateAnswer>& cs, size_t i) {
  // Gather this candidate's equivalence class by pairwise comparison, in
  // agent_id order so the weight sum is order-free.
  std::vector<const CandidateAnswer*> members;
  for (const auto& c : cs) {
    if (default_equivalent(c.answer, cs[i].answer)) members.push_back(&c);
  }
  std::sort(members.begin(), members.end(),
            [](const CandidateAnswer* a, const CandidateAnswer* b) { return a->agent_id < b->agent_id; });
  ClassStat stat;
  stat.count = static_cast<int>(members.size());
  stat.min_id = members.front()->agent_id;
  const CandidateAnswer* rep = members.front();
  for (const CandidateAnswer* m : members) {
    stat.weight += m->confidence;
    stat.max_conf = std::max(stat.max_conf, m->confidence);
    if (m->confidence > rep->confidence) rep = m;
  }
  stat.representative = rep->answer;
  return stat;
}

std::string vote_oracle(const std::vector<CandidateAnswer>& cs, bool weighted) {
  ClassStat best;
  bool first = true;
  for (size_t i = 0; i < cs.size(); ++i) {
    ClassStat stat = class_stat_for(cs, i);
    double primary = weighted ? stat.weight : static_cast<double>(stat.count);
    double best_primary = weighted ? best.weight : static_cast<double>(best.count);
    if (first || primary > best_primary ||
        (primary == best_primary &&
         (stat.max_conf > best.max_conf ||
          (stat.max_conf == best.max_conf && stat.min_id < best.min_id)))) {
      best = stat;
      first = false;
    }
  }
  return best.representative;
}

CandidateAnswer fewtool_oracle(const std::vector<CandidateAnswer>& cs) {
  size_t best = 0;
  for (size_t i = 1; i < cs.size(); ++i) {
    bool wins = cs[i].tool_calls < cs[best].tool_calls;
    if (cs[i].tool_calls == cs[best].tool_calls) {
      wins = cs[i].confidence > cs[best].confidence ||
             (cs[i].confidence == cs[best].confidence && cs[i].agent_id < cs[best].agent_id);
    }
    if (wins) best = i;
  }
  return cs[best];
}

// Explicit subset enumeration for pass@k.
double pass_oracle(int n, const std::vector<bool>& correct, int k) {
  int bad_subsets = 0, total = 0;
  for (int mask = 0; mask < (1 << n); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    ++total;
    bool any_correct = false;
    for (int i = 0; i < n; ++i) {
      if ((mask >> i) & 1 && correct[i]) any_correct = true;
    }
    if (!any_correct) ++bad_subsets;
  }
  return 1.0 - static_cast<double>(bad_subsets) / static_cast<double>(total);
}

}  // namespace

TEST_CASE("normalization collapses case, whitespace, and punctuation") {
  CHECK(normalize_answer("  The, Answer!  ") == "the answer");
  CHECK(default_equivalent("Fort Henry", "fort henry."));
  CHECK_FALSE(default_equivalent("Fort Henry", "Fort Henry II"));
}

TEST_CASE("bon argmax and tie-break") {
  CHECK(bon({cand("a0", "X", 0.9), cand("a1", "Y", 0.4)}).answer == "X");
  CHECK(bon({cand("a1", "Y", 0.7), cand("a0", "X", 0.7)}).agent_id == "a0");
  CHECK(bon({cand("a0", "only", 0.2)}).answer == "only");
  CHECK_THROWS_AS(bon({}), std::invalid_argument);
}

TEST_CASE("bon is order-independent over all permutations") {
  std::vector<CandidateAnswer> cs = {cand("a0", "X", 0.7), cand("a1", "Y", 0.7),
                                     cand("a2", "Z", 0.5)};
  std::sort(cs.begin(), cs.end(),
            [](const CandidateAnswer& a, const CandidateAnswer& b) { return a.agent_id < b.agent_id; });
  std::string expected = bon(cs).answer;
  std::vector<size_t> perm = {0, 1, 2};
  do {
    std::vector<CandidateAnswer> shuffled;
    for (size_t i : perm) shuffled.push_back(cs[i]);
    CHECK(bon(shuffled).answer == expected);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST_CASE("mv plurality, count-beats-confidence, and tie rules") {
  CHECK(mv({cand("a0", "X", 0.5), cand("a1", "X", 0.5), cand("a2", "Y", 0.9)}) == "X");
  // Count 2 beats the 0.9-confidence singleton.
  CHECK(mv({cand("a0", "X", 0.9), cand("a1", "Y", 0.5), cand("a2", "Y", 0.6)}) == "Y");
  // 1-1 tie: the class holding the max-confidence member wins.
  CHECK(mv({cand("a0", "X", 0.9), cand("a1", "Y", 0.8)}) == "X");
  CHECK_THROWS_AS(mv({}), std::invalid_argument);
}

TEST_CASE("mv brute-force oracle over the 3-candidate outcome space") {
  const std::vector<std::string> answers = {"A", "B", "C"};
  const std::vector<double> confs = {0.1, 0.5, 0.9};
  for (const auto& a0 : answers)
    for (const auto& a1 : answers)
      for (const auto& a2 : answers)
        for (double c0 : confs)
          for (double c1 : confs)
            for (double c2 : confs) {
              std::vector<CandidateAnswer> cs = {cand("a0", a0, c0), cand("a1", a1, c1),
                                                 cand("a2", a2, c2)};
              CHECK(mv(cs) == vote_oracle(cs, false));
            }
}

TEST_CASE("wmv weighted sums and arithmetic examples") {
  CHECK(wmv({cand("a0", "X", 0.9), cand("a1", "Y", 0.5), cand("a2", "Y", 0.5)}) == "Y");  // 1.0 > 0.9
  CHECK(wmv({cand("a0", "X", 0.9), cand("a1", "Y", 0.5), cand("a2", "Y", 0.3)}) == "X");  // 0.9 > 0.8
  CHECK_THROWS_AS(wmv({}), std::invalid_argument);
}

TEST_CASE("wmv with equal confidences coincides with mv") {
  sim::Splitmix64 rng(77);
  const std::vector<std::string> alphabet = {"A", "B", "C"};
  for (int trial = 0; trial < 2000; ++trial) {
    size_t n = 1 + rng.next_below(5);
    std::vector<CandidateAnswer> cs;
    for (size_t i = 0; i < n; ++i) {
      cs.push_back(cand("a" + std::to_string(i), alphabet[rng.next_below(3)], 0.6));
    }
    CHECK(wmv(cs) == mv(cs));
  }
}

TEST_CASE("fewtool argmin and tie rules") {
  CHECK(fewtool({cand("a0", "X", 0.5, 40), cand("a1", "Y", 0.5, 12)}).answer == "Y");
  CHECK(fewtool({cand("a0", "X", 0.9, 10), cand("a1", "Y", 0.5, 10)}).answer == "X");
  CHECK(fewtool({cand("a0", "solo", 0.4, 3)}).answer == "solo");
  CHECK_THROWS_AS(fewtool({}), std::invalid_argument);
}

TEST_CASE("avg is the mean judged correctness") {
  Judge judge = Judge::exact_match();
  CHECK(avg({cand("a0", "right", 0.5), cand("a1", "wrong", 0.5)}, "right", judge) == 0.5);
  CHECK(avg({cand("a0", "right", 0.5), cand("a1", "Right!", 0.5)}, "right", judge) == 1.0);
  CHECK(avg({cand("a0", "no", 0.5), cand("a1", "nope", 0.5)}, "right", judge) == 0.0);
  CHECK_THROWS_AS(avg({}, "gold", judge), std::invalid_argument);
}

TEST_CASE("pass_at_k closed form and boundaries") {
  Judge judge = Judge::exact_match();
  std::vector<CandidateAnswer> one_of_two = {cand("a0", "gold", 0.5), cand("a1", "off", 0.5)};
  CHECK(pass_at_k(one_of_two, "gold", judge, 1) == 0.5);
  CHECK(pass_at_k(one_of_two, "gold", judge, 2) == 1.0);  // k=N with c>=1 is the oracle
  std::vector<CandidateAnswer> none = {cand("a0", "off", 0.5), cand("a1", "off2", 0.5)};
  CHECK(pass_at_k(none, "gold", judge, 1) == 0.0);
  CHECK(pass_at_k(none, "gold", judge, 2) == 0.0);
  CHECK_THROWS_AS(pass_at_k(one_of_two, "gold", judge, 0), std::invalid_argument);
  CHECK_THROWS_AS(pass_at_k(one_of_two, "gold", judge, 3), std::invalid_argument);
}

TEST_CASE("pass_at_k matches subset enumeration and is monotone in k") {
  for (int n = 1; n <= 8; ++n) {
    for (int c = 0; c <= n; ++c) {
      std::vector<bool> correct(n, false);
      for (int i = 0; i < c; ++i) correct[i] = true;
      double previous = 0.0;
      for (int k = 1; k <= n; ++k) {
        double value = pass_at_k_from_correct(n, c, k);
        CHECK(value == doctest::Approx(pass_oracle(n, correct, k)).epsilon(1e-12));
        CHECK(value >= previous);
        previous = value;
      }
      if (c >= 1) CHECK(pass_at_k_from_correct(n, c, n) == 1.0);
    }
  }
}

TEST_CASE("all rules are permutation-invariant on random candidate sets") {
  sim::Splitmix64 rng(123);
  const std::vector<std::string> alphabet = {"A", "B", "C"};
  for (int trial = 0; trial < 300; ++trial) {
    size_t n = 2 + rng.next_below(4);
    std::vector<CandidateAnswer> cs;
    for (size_t i = 0; i < n; ++i) {
      cs.push_back(cand("a" + std::to_string(i), alphabet[rng.next_below(3)],
                        0.1 * static_cast<double>(rng.next_below(11)),
                        1 + static_cast<int64_t>(rng.next_below(5))));
    }
    std::string expected_bon = bon(cs).answer;
    std::string expected_mv = mv(cs);
    std::string expected_wmv = wmv(cs);
    std::string expected_few = fewtool(cs).answer;
    for (int shuffle = 0; shuffle < 5; ++shuffle) {
      for (size_t i = cs.size() - 1; i > 0; --i) {
        std::swap(cs[i], cs[rng.next_below(i + 1)]);
      }
      CHECK(bon(cs).answer == expected_bon);
      CHECK(mv(cs) == expected_mv);
      CHECK(wmv(cs) == expected_wmv);
      CHECK(fewtool(cs).answer == expected_few);
    }
  }
}

TEST_CASE("bon, mv, and wmv coincide on singletons") {
  CandidateAnswer only = cand("a0", "the one", 0.35, 7);
  CHECK(bon({only}).answer == "the one");
  CHECK(mv({only}) == "the one");
  CHECK(wmv({only}) == "the one");
  CHECK(fewtool({only}).answer == "the one");
}

TEST_CASE("implementations match oracles on a random sweep") {
  sim::Splitmix64 rng(9);
  const std::vector<std::string> alphabet = {"A", "B", "C"};
  for (int trial = 0; trial < 3000; ++trial) {
    size_t n = 1 + rng.next_below(5);
    std::vector<CandidateAnswer> cs;
    for (size_t i = 0; i < n; ++i) {
      cs.push_back(cand("a" + std::to_string(i), alphabet[rng.next_below(3)],
                        0.1 * static_cast<double>(rng.next_below(11)),
                        1 + static_cast<int64_t>(rng.next_below(5))));
    }
    CHECK(bon(cs).agent_id == bon_oracle(cs).agent_id);
    CHECK(mv(cs) == vote_oracle(cs, false));
    CHECK(wmv(cs) == vote_oracle(cs, true));
    CHECK(fewtool(cs).agent_id == fewtool_oracle(cs).agent_id);
  }
}

TEST_CASE("rule parsing") {
  CHECK(AggregationRule::parse("bon")->name == AggregationRule::Name::bon);
  CHECK(AggregationRule::parse("pass@3")->k == 3);
  CHECK(AggregationRule::parse("pass_at_k")->name == AggregationRule::Name::pass_at_k);
  CHECK_FALSE(AggregationRule::parse("magic").has_value());
}

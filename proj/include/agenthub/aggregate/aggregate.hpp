#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "agenthub/core/types.hpp"

namespace agenthub::agg {

// Answer equality for MV/WMV grouping and the default judge: lowercase,
// punctuation stripped, whitespace collapsed.
std::string normalize_answer(std::string_view answer);
bool default_equivalent(const std::string& a, const std::string& b);

using Equivalence = std::function<bool(const std::string&, const std::string&)>;

struct Judge {
  enum class Kind { exact_match_normalized, external };

  Kind kind = Kind::exact_match_normalized;
  std::function<bool(const std::string& answer, const std::string& gold)> fn;

  static Judge exact_match();
  static Judge external(std::function<bool(const std::string&, const std::string&)> fn);

  bool operator()(const std::string& answer, const std::string& gold) const;
};

// The six team-level strategies. All are order-independent: every tie breaks
// through confidence and then lowest agent_id, never list position.

// Highest self-reported confidence.
CandidateAnswer bon(const std::vector<CandidateAnswer>& candidates);

// Most frequent answer class; frequency ties -> the tied class's maximum
// confidence, then lowest agent_id. Returns the winning class's
// highest-confidence member's answer text.
std::string mv(const std::vector<CandidateAnswer>& candidates,
               const Equivalence& equivalent = default_equivalent);

// Largest summed confidence per class (summed in agent_id order); ties as mv.
std::string wmv(const std::vector<CandidateAnswer>& candidates,
                const Equivalence& equivalent = default_equivalent);

// Fewest tool calls; ties -> highest confidence, then lowest agent_id.
CandidateAnswer fewtool(const std::vector<CandidateAnswer>& candidates);

// Mean per-candidate correctness under the judge.
double avg(const std::vector<CandidateAnswer>& candidates, const std::string& gold,
           const Judge& judge);

// Exact subset expectation 1 - C(N-c,k)/C(N,k); equals the oracle indicator
// [c >= 1] at k = N.
double pass_at_k(const std::vector<CandidateAnswer>& candidates, const std::string& gold,
                 const Judge& judge, int k);
double pass_at_k_from_correct(int n, int correct, int k);

struct AggregationRule {
  enum class Name { pass_at_k, bon, mv, wmv, fewtool, avg };

  Name name = Name::bon;
  int k = 1;  // pass_at_k only

  static AggregationRule bon() { return {Name::bon, 1}; }
  static std::optional<AggregationRule> parse(const std::string& text);
  std::string to_string() const;
};

}  // namespace agenthub::agg

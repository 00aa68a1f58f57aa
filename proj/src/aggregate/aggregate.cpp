#include "agenthub/aggregate/aggregate.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace agenthub::agg {

std::string normalize_answer(std::string_view answer) {
  std::string out;
  bool in_space = true;  // swallow leading separators
  for (char c : answer) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      in_space = false;
    } else if (!in_space) {
      out += ' ';
      in_space = true;
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

bool default_equivalent(const std::string& a, const std::string& b) {
  return normalize_answer(a) == normalize_answer(b);
}

Judge Judge::exact_match() {
  Judge judge;
  judge.kind = Kind::exact_match_normalized;
  judge.fn = [](const std::string& answer, const std::string& gold) {
    return default_equivalent(answer, gold);
  };
  return judge;
}

Judge Judge::external(std::function<bool(const std::string&, const std::string&)> fn) {
  Judge judge;
  judge.kind = Kind::external;
  judge.fn = std::move(fn);
  return judge;
}

bool Judge::operator()(const std::string& answer, const std::string& gold) const {
  return fn(answer, gold);
}

namespace {

void require_nonempty(const std::vector<CandidateAnswer>& candidates, const char* op) {
  if (candidates.empty()) {
    throw std::invalid_argument(std::string(op) + ": candidate set is empty");
  }
}

// Candidates sorted by agent_id; makes class statistics (and confidence sums)
// independent of input order.
std::vector<CandidateAnswer> by_agent_id(std::vector<CandidateAnswer> candidates) {
  std::sort(candidates.begin(), candidates.end(),
            [](const CandidateAnswer& a, const CandidateAnswer& b) { return a.agent_id < b.agent_id; });
  return candidates;
}

struct AnswerClass {
  std::vector<size_t> members;  // indices into the agent_id-sorted list
  double weight = 0.0;          // summed confidence, in agent_id order
  double max_confidence = 0.0;
  std::string min_agent_id;
};

std::vector<AnswerClass> group_classes(const std::vector<CandidateAnswer>& sorted,
                                       const Equivalence& equivalent) {
  std::vector<AnswerClass> classes;
  for (size_t i = 0; i < sorted.size(); ++i) {
    bool placed = false;
    for (auto& cls : classes) {
      if (equivalent(sorted[cls.members.front()].answer, sorted[i].answer)) {
        cls.members.push_back(i);
        cls.weight += sorted[i].confidence;
        cls.max_confidence = std::max(cls.max_confidence, sorted[i].confidence);
        placed = true;
        break;
      }
    }
    if (!placed) {
      AnswerClass cls;
      cls.members = {i};
      cls.weight = sorted[i].confidence;
      cls.max_confidence = sorted[i].confidence;
      cls.min_agent_id = sorted[i].agent_id;
      classes.push_back(std::move(cls));
    }
  }
  return classes;
}

// Winning class under (primary score, max confidence, lowest agent_id).
const AnswerClass& best_class(const std::vector<AnswerClass>& classes,
                              const std::function<double(const AnswerClass&)>& score) {
  const AnswerClass* best = &classes.front();
  for (const auto& cls : classes) {
    double s = score(cls);
    double bs = score(*best);
    if (s > bs ||
        (s == bs && (cls.max_confidence > best->max_confidence ||
                     (cls.max_confidence == best->max_confidence &&
                      cls.min_agent_id < best->min_agent_id)))) {
      best = &cls;
    }
  }
  return *best;
}

std::string class_representative(const AnswerClass& cls,
                                 const std::vector<CandidateAnswer>& sorted) {
  size_t best = cls.members.front();
  for (size_t idx : cls.members) {
    if (sorted[idx].confidence > sorted[best].confidence) best = idx;
  }
  return sorted[best].answer;  // agent_id order breaks confidence ties
}

int count_correct(const std::vector<CandidateAnswer>& candidates, const std::string& gold,
                  const Judge& judge) {
  int correct = 0;
  for (const auto& c : candidates) {
    if (judge(c.answer, gold)) ++correct;
  }
  return correct;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double result = 1.0;
  for (int i = 0; i < k; ++i) {
    result = result * static_cast<double>(n - i) / static_cast<double>(i + 1);
  }
  return result;
}

}  // namespace

CandidateAnswer bon(const std::vector<CandidateAnswer>& candidates) {
  require_nonempty(candidates, "bon");
  const CandidateAnswer* best = &candidates.front();
  for (const auto& c : candidates) {
    if (c.confidence > best->confidence ||
        (c.confidence == best->confidence && c.agent_id < best->agent_id)) {
      best = &c;
    }
  }
  return *best;
}

std::string mv(const std::vector<CandidateAnswer>& candidates, const Equivalence& equivalent) {
  require_nonempty(candidates, "mv");
  std::vector<CandidateAnswer> sorted = by_agent_id(candidates);
  std::vector<AnswerClass> classes = group_classes(sorted, equivalent);
  const AnswerClass& winner =
      best_class(classes, [](const AnswerClass& c) { return static_cast<double>(c.members.size()); });
  return class_representative(winner, sorted);
}

std::string wmv(const std::vector<CandidateAnswer>& candidates, const Equivalence& equivalent) {
  require_nonempty(candidates, "wmv");
  std::vector<CandidateAnswer> sorted = by_agent_id(candidates);
  std::vector<AnswerClass> classes = group_classes(sorted, equivalent);
  const AnswerClass& winner = best_class(classes, [](const AnswerClass& c) { return c.weight; });
  return class_representative(winner, sorted);
}

CandidateAnswer fewtool(const std::vector<CandidateAnswer>& candidates) {
  require_nonempty(candidates, "fewtool");
  const CandidateAnswer* best = &candidates.front();
  for (const auto& c : candidates) {
    if (c.tool_calls < best->tool_calls ||
        (c.tool_calls == best->tool_calls &&
         (c.confidence > best->confidence ||
          (c.confidence == best->confidence && c.agent_id < best->agent_id)))) {
      best = &c;
    }
  }
  return *best;
}

double avg(const std::vector<CandidateAnswer>& candidates, const std::string& gold,
           const Judge& judge) {
  require_nonempty(candidates, "avg");
  return static_cast<double>(count_correct(candidates, gold, judge)) /
         static_cast<double>(candidates.size());
}

double pass_at_k_from_correct(int n, int correct, int k) {
  if (k < 1 || k > n) {
    throw std::invalid_argument("pass_at_k: k must satisfy 1 <= k <= N");
  }
  if (correct <= 0) return 0.0;
  return 1.0 - binomial(n - correct, k) / binomial(n, k);
}

double pass_at_k(const std::vector<CandidateAnswer>& candidates, const std::string& gold,
                 const Judge& judge, int k) {
  require_nonempty(candidates, "pass_at_k");
  return pass_at_k_from_correct(static_cast<int>(candidates.size()),
                                count_correct(candidates, gold, judge), k);
}

std::optional<AggregationRule> AggregationRule::parse(const std::string& text) {
  AggregationRule rule;
  std::string name = text;
  size_t at = text.find('@');
  if (at != std::string::npos) {
    name = text.substr(0, at);
    rule.k = std::atoi(text.c_str() + at + 1);
  }
  if (name == "bon") {
    rule.name = Name::bon;
  } else if (name == "mv") {
    rule.name = Name::mv;
  } else if (name == "wmv") {
    rule.name = Name::wmv;
  } else if (name == "fewtool") {
    rule.name = Name::fewtool;
  } else if (name == "avg") {
    rule.name = Name::avg;
  } else if (name == "pass_at_k" || name == "pass") {
    rule.name = Name::pass_at_k;
  } else {
    return std::nullopt;
  }
  return rule;
}

std::string AggregationRule::to_string() const {
  switch (name) {
    case Name::bon:
      return "bon";
    case Name::mv:
      return "mv";
    case Name::wmv:
      return "wmv";
    case Name::fewtool:
      return "fewtool";
    case Name::avg:
      return "avg";
    case Name::pass_at_k:
      return "pass@" + std::to_string(k);
  }
  return "bon";
}

}  // namespace agenthub::agg

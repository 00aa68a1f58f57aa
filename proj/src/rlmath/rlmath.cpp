#include "agenthub/rlmath/rlmath.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "agenthub/sim/rng.hpp"

namespace agenthub::rlmath {

double shaped_reward(int success, int steps, int step_cap, double lambda) {
  if (steps < 0 || step_cap <= 0 || lambda < 0.0) {
    throw std::invalid_argument("shaped_reward: need steps >= 0, step_cap > 0, lambda >= 0");
  }
  double bonus = std::max(0.0, 1.0 - static_cast<double>(steps) / static_cast<double>(step_cap));
  return static_cast<double>(success) + lambda * bonus;
}

std::vector<double> group_advantages(const RewardGroup& group) {
  const size_t g = group.rewards.size();
  if (g < 2) throw std::invalid_argument("group_advantages: need G >= 2 rewards");
  if (group.epsilon <= 0.0) throw std::invalid_argument("group_advantages: epsilon must be > 0");

  double mean = 0.0;
  for (double r : group.rewards) mean += r;
  mean /= static_cast<double>(g);

  double variance = 0.0;
  for (double r : group.rewards) variance += (r - mean) * (r - mean);
  variance /= static_cast<double>(g);  // population std, no Bessel correction
  double std_dev = std::sqrt(variance);

  std::vector<double> advantages;
  advantages.reserve(g);
  for (double r : group.rewards) {
    advantages.push_back((r - mean) / (std_dev + group.epsilon));
  }
  return advantages;
}

double clipped_term(double ratio, double advantage, double clip_width) {
  if (ratio <= 0.0) throw std::invalid_argument("clipped_term: ratio must be > 0");
  if (clip_width <= 0.0 || clip_width >= 1.0) {
    throw std::invalid_argument("clipped_term: clip width must be in (0,1)");
  }
  double clipped_ratio = std::clamp(ratio, 1.0 - clip_width, 1.0 + clip_width);
  return std::min(ratio * advantage, clipped_ratio * advantage);
}

double kl_categorical(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("kl_categorical: p and q must have equal length");
  }
  constexpr double kSumTolerance = 1e-6;
  double sum_p = 0.0, sum_q = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || q[i] < 0.0) {
      throw std::invalid_argument("kl_categorical: probabilities must be nonnegative");
    }
    sum_p += p[i];
    sum_q += q[i];
  }
  if (std::abs(sum_p - 1.0) > kSumTolerance || std::abs(sum_q - 1.0) > kSumTolerance) {
    throw std::invalid_argument("kl_categorical: inputs must sum to 1");
  }

  double kl = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] <= 0.0) {
      throw std::invalid_argument("kl_categorical: q must be positive wherever p is");
    }
    kl += p[i] * std::log(p[i] / q[i]);
  }
  return kl;
}

double grpo_objective(const std::vector<std::pair<double, double>>& ratio_advantage_pairs,
                      double clip_width, double beta, double kl_value) {
  if (ratio_advantage_pairs.empty()) {
    throw std::invalid_argument("grpo_objective: group is empty");
  }
  if (beta < 0.0) throw std::invalid_argument("grpo_objective: beta must be >= 0");
  double surrogate = 0.0;
  for (const auto& [ratio, advantage] : ratio_advantage_pairs) {
    surrogate += clipped_term(ratio, advantage, clip_width);
  }
  surrogate /= static_cast<double>(ratio_advantage_pairs.size());
  return surrogate - beta * kl_value;
}

namespace {

std::vector<double> random_simplex(sim::Splitmix64& rng, size_t n) {
  std::vector<double> v(n);
  double total = 0.0;
  for (auto& x : v) {
    x = -std::log(rng.next_double() + 1e-300);
    total += x;
  }
  for (auto& x : v) x /= total;
  return v;
}

}  // namespace

std::vector<CheckResult> run_property_checks(uint64_t seed) {
  std::vector<CheckResult> results;
  sim::Splitmix64 rng(seed);

  {
    CheckResult check{"group_advantages [1,0] -> [+1,-1] within 1e-6", false, ""};
    auto adv = group_advantages({{1.0, 0.0}, 1e-8});
    check.passed = std::abs(adv[0] - 1.0) < 1e-6 && std::abs(adv[1] + 1.0) < 1e-6;
    results.push_back(check);
  }
  {
    CheckResult check{"group_advantages translation invariance (1000 groups, 1e-9)", true, ""};
    for (int trial = 0; trial < 1000 && check.passed; ++trial) {
      size_t g = 2 + rng.next_below(6);
      RewardGroup group;
      for (size_t i = 0; i < g; ++i) group.rewards.push_back(rng.next_double() * 4.0 - 2.0);
      RewardGroup shifted = group;
      double c = rng.next_double() * 10.0 - 5.0;
      for (auto& r : shifted.rewards) r += c;
      auto a = group_advantages(group);
      auto b = group_advantages(shifted);
      for (size_t i = 0; i < g; ++i) {
        if (std::abs(a[i] - b[i]) > 1e-9) check.passed = false;
      }
    }
    results.push_back(check);
  }
  {
    CheckResult check{"clipped_term matches min definition (10000 samples)", true, ""};
    for (int trial = 0; trial < 10000 && check.passed; ++trial) {
      double ratio = 0.05 + rng.next_double() * 3.0;
      double advantage = rng.next_double() * 6.0 - 3.0;
      double delta = 0.01 + rng.next_double() * 0.98;
      double direct = std::min(ratio * advantage,
                               std::clamp(ratio, 1.0 - delta, 1.0 + delta) * advantage);
      if (clipped_term(ratio, advantage, delta) != direct) check.passed = false;
    }
    results.push_back(check);
  }
  {
    CheckResult check{"kl_categorical(p,p) <= 1e-12", true, ""};
    for (int trial = 0; trial < 100 && check.passed; ++trial) {
      auto p = random_simplex(rng, 2 + rng.next_below(10));
      if (std::abs(kl_categorical(p, p)) > 1e-12) check.passed = false;
    }
    results.push_back(check);
  }
  {
    CheckResult check{"Gibbs nonnegativity on 1000 random simplex pairs", true, ""};
    for (int trial = 0; trial < 1000 && check.passed; ++trial) {
      size_t n = 2 + rng.next_below(10);
      auto p = random_simplex(rng, n);
      auto q = random_simplex(rng, n);
      if (kl_categorical(p, q) < 0.0) check.passed = false;
    }
    results.push_back(check);
  }
  {
    CheckResult check{"clipped_term is a pointwise lower bound", true, ""};
    for (int trial = 0; trial < 1000 && check.passed; ++trial) {
      double ratio = 0.05 + rng.next_double() * 3.0;
      double advantage = rng.next_double() * 6.0 - 3.0;
      double delta = 0.01 + rng.next_double() * 0.98;
      double term = clipped_term(ratio, advantage, delta);
      double clipped_ratio = std::clamp(ratio, 1.0 - delta, 1.0 + delta);
      if (advantage >= 0.0 && term > ratio * advantage) check.passed = false;
      if (advantage < 0.0 && term > clipped_ratio * advantage) check.passed = false;
    }
    results.push_back(check);
  }
  return results;
}

}  // namespace agenthub::rlmath

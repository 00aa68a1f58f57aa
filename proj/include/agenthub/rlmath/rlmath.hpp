#pragma once

#include <string>
#include <utility>
#include <vector>

namespace agenthub::rlmath {

// Group-relative optimization arithmetic as pure functions. Training loops,
// gradients, and parameter updates live elsewhere (or nowhere).

struct RewardGroup {
  std::vector<double> rewards;  // G >= 2 for normalization
  double epsilon = 1e-8;
};

// R = success + lambda * max(0, 1 - steps/step_cap): the bonus decays
// linearly to zero at the cap and stays zero beyond it.
double shaped_reward(int success, int steps, int step_cap, double lambda);

// (R_g - mean) / (std + epsilon), population std.
std::vector<double> group_advantages(const RewardGroup& group);

// min(rho * adv, clip(rho, 1-delta, 1+delta) * adv).
double clipped_term(double ratio, double advantage, double clip_width);

// sum p_i log(p_i / q_i); requires matching support (q_i > 0 where p_i > 0)
// and both vectors summing to 1 within tolerance.
double kl_categorical(const std::vector<double>& p, const std::vector<double>& q);

// mean over the group of clipped_term minus beta * kl_value.
double grpo_objective(const std::vector<std::pair<double, double>>& ratio_advantage_pairs,
                      double clip_width, double beta, double kl_value);

// Property-suite entry point behind the CLI `rlmath check`.
struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};
std::vector<CheckResult> run_property_checks(uint64_t seed = 20240901);

}  // namespace agenthub::rlmath

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace agenthub::sim {

// Synthetic knowledge-space model: a task is solved once an agent's
// discovered fact set covers the required subset. Stochastic searcher agents
// stand in for tool-using models; the hub is a published-fragment pool.

struct KnowledgeSpace {
  int fact_count = 0;          // M
  std::vector<int> required;   // S* as sorted fact ids
  uint64_t seed = 0;
};

KnowledgeSpace make_space(int fact_count, int required_count, uint64_t seed);

enum class BiasKind {
  uniform,  // every agent samples all facts uniformly
  sliced,   // agent i upweights slice (i mod 8) of a fixed 8-way partition
};

struct SimPolicy {
  bool hub_enabled = true;
  int episode_length = 5;        // E: steps between hub writes
  double read_probability = 0.25;
  int team_size = 1;             // N
  int step_cap = 0;              // 0 -> 10 * M
  BiasKind bias = BiasKind::uniform;
  double slice_weight = 8.0;     // sliced: weight on the own slice vs 1 elsewhere
};

struct AgentOutcome {
  bool solved = false;
  int steps_to_solve = 0;  // step cap when unsolved
  int search_steps = 0;
  int hub_reads = 0;
  int hub_writes = 0;
};

struct SeedOutcome {
  uint64_t seed = 0;
  std::vector<AgentOutcome> agents;
  bool team_solved = false;  // Pass@N indicator for this seed
  int hub_reads = 0;
  int hub_writes = 0;
};

struct SimMetrics {
  std::vector<SeedOutcome> per_seed;
  double pass_rate = 0.0;          // mean team_solved
  double mean_search_steps = 0.0;  // per agent
  double mean_hub_traffic = 0.0;   // reads + writes per seed
};

// Bias weights per agent; defaults derive from policy.bias. The slice
// partition is fixed 8-way regardless of team size, so an agent's draw
// stream never depends on N.
std::vector<std::vector<double>> default_biases(const KnowledgeSpace& space,
                                                const SimPolicy& policy);

SimMetrics run_sim(const KnowledgeSpace& space, const SimPolicy& policy,
                   const std::vector<uint64_t>& seeds);
SimMetrics run_sim_with_biases(const KnowledgeSpace& space, const SimPolicy& policy,
                               const std::vector<std::vector<double>>& biases,
                               const std::vector<uint64_t>& seeds);

struct ScalingRow {
  int team_size = 0;
  double pass_at_n = 0.0;
  double mean_search_steps_hub = 0.0;
  double mean_search_steps_isolated = 0.0;
  double mean_hub_traffic = 0.0;
};

struct ScalingReport {
  std::vector<ScalingRow> rows;
  bool pass_monotone_per_seed = false;   // Pass@N never drops as N grows, per seed
  bool traffic_increasing = false;       // mean hub traffic strictly grows in N
  double paired_p_value = 1.0;           // H1: hub search steps < isolated, at max N
  int max_team_size = 0;
};

ScalingReport scaling_report(const KnowledgeSpace& space, const SimPolicy& base_policy,
                             const std::vector<int>& team_sizes,
                             const std::vector<uint64_t>& seeds);

nlohmann::json metrics_to_json(const SimMetrics& metrics);
nlohmann::json report_to_json(const ScalingReport& report);

std::vector<uint64_t> seed_range(uint64_t start, size_t count);

}  // namespace agenthub::sim

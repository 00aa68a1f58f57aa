#include "agenthub/sim/sim.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "agenthub/sim/rng.hpp"
#include "agenthub/sim/stats.hpp"

namespace agenthub::sim {

namespace {

constexpr uint64_t kDrawPurpose = 1;
constexpr uint64_t kReadPurpose = 2;
constexpr int kSlicePartitions = 8;

struct AgentRun {
  std::vector<bool> discovered;
  std::vector<bool> published;  // what this agent has pushed to the hub
  int required_remaining = 0;
  AgentOutcome outcome;
  Splitmix64 draw_rng;
  Splitmix64 read_rng;

  AgentRun(int fact_count, int required_count, uint64_t draw_seed, uint64_t read_seed)
      : discovered(fact_count, false),
        published(fact_count, false),
        required_remaining(required_count),
        draw_rng(draw_seed),
        read_rng(read_seed) {}
};

}  // namespace

KnowledgeSpace make_space(int fact_count, int required_count, uint64_t seed) {
  if (fact_count < 1 || required_count < 1 || required_count > fact_count) {
    throw std::invalid_argument("make_space: need 1 <= |S*| <= M");
  }
  KnowledgeSpace space;
  space.fact_count = fact_count;
  space.seed = seed;

  // Seeded partial Fisher-Yates pick of the required subset.
  std::vector<int> facts(fact_count);
  for (int i = 0; i < fact_count; ++i) facts[i] = i;
  Splitmix64 rng(stream_seed(seed, 0, 0));
  for (int i = 0; i < required_count; ++i) {
    size_t j = i + static_cast<size_t>(rng.next_below(fact_count - i));
    std::swap(facts[i], facts[j]);
  }
  space.required.assign(facts.begin(), facts.begin() + required_count);
  std::sort(space.required.begin(), space.required.end());
  return space;
}

std::vector<std::vector<double>> default_biases(const KnowledgeSpace& space,
                                                const SimPolicy& policy) {
  std::vector<std::vector<double>> biases;
  for (int agent = 0; agent < policy.team_size; ++agent) {
    std::vector<double> weights(space.fact_count, 1.0);
    if (policy.bias == BiasKind::sliced) {
      int slice = agent % kSlicePartitions;
      for (int fact = 0; fact < space.fact_count; ++fact) {
        if (fact % kSlicePartitions == slice) weights[fact] = policy.slice_weight;
      }
    }
    biases.push_back(std::move(weights));
  }
  return biases;
}

SimMetrics run_sim(const KnowledgeSpace& space, const SimPolicy& policy,
                   const std::vector<uint64_t>& seeds) {
  return run_sim_with_biases(space, policy, default_biases(space, policy), seeds);
}

SimMetrics run_sim_with_biases(const KnowledgeSpace& space, const SimPolicy& policy,
                               const std::vector<std::vector<double>>& biases,
                               const std::vector<uint64_t>& seeds) {
  if (policy.team_size < 1) throw std::invalid_argument("run_sim: team_size must be >= 1");
  if (policy.episode_length < 1) throw std::invalid_argument("run_sim: episode_length must be >= 1");
  if (policy.read_probability < 0.0 || policy.read_probability > 1.0) {
    throw std::invalid_argument("run_sim: read_probability must be in [0,1]");
  }
  if (biases.size() != static_cast<size_t>(policy.team_size)) {
    throw std::invalid_argument("run_sim: one bias vector per agent required");
  }
  const int step_cap = policy.step_cap > 0 ? policy.step_cap : 10 * space.fact_count;
  std::vector<bool> required_mask(space.fact_count, false);
  for (int fact : space.required) required_mask[fact] = true;

  SimMetrics metrics;
  double search_total = 0.0;
  size_t agent_total = 0;

  for (uint64_t seed : seeds) {
    std::vector<AgentRun> agents;
    agents.reserve(policy.team_size);
    for (int i = 0; i < policy.team_size; ++i) {
      agents.emplace_back(space.fact_count, static_cast<int>(space.required.size()),
                          stream_seed(seed, i, kDrawPurpose), stream_seed(seed, i, kReadPurpose));
    }
    std::vector<bool> hub_pool(space.fact_count, false);  // union of published fragments

    auto absorb = [&](AgentRun& agent) {
      for (int fact = 0; fact < space.fact_count; ++fact) {
        if (hub_pool[fact] && !agent.discovered[fact]) {
          agent.discovered[fact] = true;
          if (required_mask[fact]) agent.required_remaining -= 1;
        }
      }
    };

    for (int step = 1; step <= step_cap; ++step) {
      bool all_solved = true;

      // Phase 1: every unsolved agent samples one fact from its bias.
      for (int i = 0; i < policy.team_size; ++i) {
        AgentRun& agent = agents[i];
        if (agent.outcome.solved) continue;
        all_solved = false;
        size_t fact = sample_weighted(biases[i], agent.draw_rng);
        agent.outcome.search_steps += 1;
        if (!agent.discovered[fact]) {
          agent.discovered[fact] = true;
          if (required_mask[fact]) agent.required_remaining -= 1;
        }
      }
      if (all_solved) break;

      // Phase 2: periodic publication of the discovered delta.
      if (policy.hub_enabled && step % policy.episode_length == 0) {
        for (auto& agent : agents) {
          if (agent.outcome.solved) continue;
          for (int fact = 0; fact < space.fact_count; ++fact) {
            if (agent.discovered[fact] && !agent.published[fact]) {
              agent.published[fact] = true;
              hub_pool[fact] = true;
            }
          }
          agent.outcome.hub_writes += 1;
        }
      }

      // Phase 3: probabilistic absorption of the published union.
      if (policy.hub_enabled) {
        for (auto& agent : agents) {
          if (agent.outcome.solved) continue;
          if (agent.read_rng.next_bernoulli(policy.read_probability)) {
            absorb(agent);
            agent.outcome.hub_reads += 1;
          }
        }
      }

      for (auto& agent : agents) {
        if (!agent.outcome.solved && agent.required_remaining == 0) {
          agent.outcome.solved = true;
          agent.outcome.steps_to_solve = step;
        }
      }
    }

    SeedOutcome seed_outcome;
    seed_outcome.seed = seed;
    for (auto& agent : agents) {
      if (!agent.outcome.solved) agent.outcome.steps_to_solve = step_cap;
      seed_outcome.team_solved = seed_outcome.team_solved || agent.outcome.solved;
      seed_outcome.hub_reads += agent.outcome.hub_reads;
      seed_outcome.hub_writes += agent.outcome.hub_writes;
      search_total += agent.outcome.search_steps;
      agent_total += 1;
      seed_outcome.agents.push_back(agent.outcome);
    }
    metrics.per_seed.push_back(std::move(seed_outcome));
  }

  double pass_total = 0.0, traffic_total = 0.0;
  for (const auto& seed_outcome : metrics.per_seed) {
    pass_total += seed_outcome.team_solved ? 1.0 : 0.0;
    traffic_total += seed_outcome.hub_reads + seed_outcome.hub_writes;
  }
  if (!metrics.per_seed.empty()) {
    metrics.pass_rate = pass_total / static_cast<double>(metrics.per_seed.size());
    metrics.mean_hub_traffic = traffic_total / static_cast<double>(metrics.per_seed.size());
  }
  if (agent_total > 0) {
    metrics.mean_search_steps = search_total / static_cast<double>(agent_total);
  }
  return metrics;
}

ScalingReport scaling_report(const KnowledgeSpace& space, const SimPolicy& base_policy,
                             const std::vector<int>& team_sizes,
                             const std::vector<uint64_t>& seeds) {
  if (team_sizes.empty()) throw std::invalid_argument("scaling_report: no team sizes");
  if (seeds.size() < 100) {
    throw std::invalid_argument("scaling_report: need >= 100 seeds per cell for the tests");
  }
  ScalingReport report;
  report.max_team_size = *std::max_element(team_sizes.begin(), team_sizes.end());

  std::vector<std::vector<bool>> pass_by_n;  // [n_index][seed]
  std::vector<double> traffic_by_n;

  for (int n : team_sizes) {
    SimPolicy hub_policy = base_policy;
    hub_policy.team_size = n;
    hub_policy.hub_enabled = true;
    SimPolicy iso_policy = hub_policy;
    iso_policy.hub_enabled = false;

    SimMetrics hub_metrics = run_sim(space, hub_policy, seeds);
    SimMetrics iso_metrics = run_sim(space, iso_policy, seeds);

    ScalingRow row;
    row.team_size = n;
    row.pass_at_n = hub_metrics.pass_rate;
    row.mean_search_steps_hub = hub_metrics.mean_search_steps;
    row.mean_search_steps_isolated = iso_metrics.mean_search_steps;
    row.mean_hub_traffic = hub_metrics.mean_hub_traffic;
    report.rows.push_back(row);

    std::vector<bool> pass;
    pass.reserve(seeds.size());
    for (const auto& seed_outcome : hub_metrics.per_seed) {
      pass.push_back(seed_outcome.team_solved);
    }
    pass_by_n.push_back(std::move(pass));
    traffic_by_n.push_back(hub_metrics.mean_hub_traffic);

    if (n == report.max_team_size) {
      // Seed-paired per-agent search steps, hub vs isolated.
      std::vector<double> hub_steps, iso_steps;
      for (size_t s = 0; s < seeds.size(); ++s) {
        double h = 0.0, i = 0.0;
        for (const auto& a : hub_metrics.per_seed[s].agents) h += a.search_steps;
        for (const auto& a : iso_metrics.per_seed[s].agents) i += a.search_steps;
        hub_steps.push_back(h / n);
        iso_steps.push_back(i / n);
      }
      report.paired_p_value = paired_one_sided_p(hub_steps, iso_steps);
    }
  }

  report.pass_monotone_per_seed = true;
  for (size_t s = 0; s < seeds.size(); ++s) {
    for (size_t i = 1; i < pass_by_n.size(); ++i) {
      if (pass_by_n[i - 1][s] && !pass_by_n[i][s]) report.pass_monotone_per_seed = false;
    }
  }
  report.traffic_increasing = true;
  for (size_t i = 1; i < traffic_by_n.size(); ++i) {
    if (traffic_by_n[i] <= traffic_by_n[i - 1]) report.traffic_increasing = false;
  }
  return report;
}

nlohmann::json metrics_to_json(const SimMetrics& metrics) {
  nlohmann::json per_seed = nlohmann::json::array();
  for (const auto& seed_outcome : metrics.per_seed) {
    nlohmann::json agents = nlohmann::json::array();
    for (const auto& a : seed_outcome.agents) {
      agents.push_back({{"solved", a.solved},
                        {"steps_to_solve", a.steps_to_solve},
                        {"search_steps", a.search_steps},
                        {"hub_reads", a.hub_reads},
                        {"hub_writes", a.hub_writes}});
    }
    per_seed.push_back({{"seed", seed_outcome.seed},
                        {"team_solved", seed_outcome.team_solved},
                        {"hub_reads", seed_outcome.hub_reads},
                        {"hub_writes", seed_outcome.hub_writes},
                        {"agents", std::move(agents)}});
  }
  return {{"pass_rate", metrics.pass_rate},
          {"mean_search_steps", metrics.mean_search_steps},
          {"mean_hub_traffic", metrics.mean_hub_traffic},
          {"per_seed", std::move(per_seed)}};
}

nlohmann::json report_to_json(const ScalingReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"team_size", row.team_size},
                    {"pass_at_n", row.pass_at_n},
                    {"mean_search_steps_hub", row.mean_search_steps_hub},
                    {"mean_search_steps_isolated", row.mean_search_steps_isolated},
                    {"mean_hub_traffic", row.mean_hub_traffic}});
  }
  return {{"rows", std::move(rows)},
          {"pass_monotone_per_seed", report.pass_monotone_per_seed},
          {"traffic_increasing", report.traffic_increasing},
          {"paired_p_value", report.paired_p_value},
          {"max_team_size", report.max_team_size}};
}

std::vector<uint64_t> seed_range(uint64_t start, size_t count) {
  std::vector<uint64_t> seeds(count);
  for (size_t i = 0; i < count; ++i) seeds[i] = start + i;
  return seeds;
}

}  // namespace agenthub::sim

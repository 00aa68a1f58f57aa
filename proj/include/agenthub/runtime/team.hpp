#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "agenthub/aggregate/aggregate.hpp"
#include "agenthub/runtime/agent.hpp"

namespace agenthub {

enum class SchedulerMode {
  round_robin,  // deterministic: agents rotate one turn at a time
  threads,      // live: one thread per agent, no cross-run determinism promise
};

struct TeamConfig {
  Task task;
  std::vector<AgentConfig> agents;
  bool hub_enabled = true;
  agg::AggregationRule selector = agg::AggregationRule::bon();
  SchedulerMode scheduler = SchedulerMode::round_robin;
};

// Field-path-tagged validation problems, e.g. "team.agents[0].write_trigger".
std::vector<std::string> validate_team_config(const TeamConfig& config);

struct TeamResult {
  std::vector<AgentState> agents;
  std::vector<CandidateAnswer> candidates;  // answered agents, config order
  std::optional<CandidateAnswer> selected;
  bool empty_team_outcome = false;  // zero agents answered
  std::optional<std::string> run_error;
};

// Backend lookup by configured name.
using BackendResolver = std::function<Backend*(const std::string&)>;

struct TeamEnv {
  BackendResolver backends;
  Backend* write_model = nullptr;  // hub write/read models
  Backend* read_model = nullptr;
  const ToolEnv* tools = nullptr;
  EventLog* log = nullptr;
  TokenCounter counter = default_token_counter();
};

// Runs all agents against the shared hub until each is answered, exhausted,
// or failed, then applies the selector over the answered candidates.
TeamResult run_team(const TeamConfig& config, TeamEnv& env, Hub& hub);

// Applies a selector rule to candidates (bon/mv/wmv/fewtool; the score rules
// avg/pass_at_k are reporting-only and fall back to bon for selection).
std::optional<CandidateAnswer> select_answer(const std::vector<CandidateAnswer>& candidates,
                                             const agg::AggregationRule& rule);

AgentState make_initial_state(const AgentConfig& config, const ToolEnv& tools, bool hub_enabled);

}  // namespace agenthub

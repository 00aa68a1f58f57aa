#include "agenthub/runtime/team.hpp"

#include <algorithm>
#include <set>
#include <thread>

namespace agenthub {

std::vector<std::string> validate_team_config(const TeamConfig& config) {
  std::vector<std::string> errors;
  if (config.task.id.empty()) errors.push_back("task.id: must be nonempty");
  if (config.task.question.empty()) errors.push_back("task.question: must be nonempty");
  if (config.agents.empty()) errors.push_back("team.agents: at least one agent is required");

  std::set<std::string> ids;
  for (size_t i = 0; i < config.agents.size(); ++i) {
    const AgentConfig& agent = config.agents[i];
    std::string prefix = "team.agents[" + std::to_string(i) + "]";
    if (agent.agent_id.empty()) errors.push_back(prefix + ".agent_id: must be nonempty");
    if (!ids.insert(agent.agent_id).second) {
      errors.push_back(prefix + ".agent_id: duplicate id '" + agent.agent_id + "'");
    }
    if (agent.backend_ref.empty()) errors.push_back(prefix + ".backend: must name a backend");
    if (agent.write_trigger <= 0) {
      errors.push_back(prefix + ".write_trigger: must be positive");
    }
    if (agent.write_trigger > agent.context_window) {
      errors.push_back(prefix + ".write_trigger: must be <= context_window");
    }
    if (agent.round_budget <= 0) errors.push_back(prefix + ".round_budget: must be positive");
  }
  return errors;
}

AgentState make_initial_state(const AgentConfig& config, const ToolEnv& tools, bool hub_enabled) {
  AgentState state;
  state.config = config;
  state.context.system_preamble =
      config.system_prompt.empty() ? default_system_prompt(tools, hub_enabled)
                                   : config.system_prompt;
  return state;
}

std::optional<CandidateAnswer> select_answer(const std::vector<CandidateAnswer>& candidates,
                                             const agg::AggregationRule& rule) {
  if (candidates.empty()) return std::nullopt;
  using Name = agg::AggregationRule::Name;
  switch (rule.name) {
    case Name::bon:
      return agg::bon(candidates);
    case Name::fewtool:
      return agg::fewtool(candidates);
    case Name::mv:
    case Name::wmv: {
      std::string answer = rule.name == Name::mv ? agg::mv(candidates) : agg::wmv(candidates);
      // Report the highest-confidence candidate of the winning class.
      std::vector<CandidateAnswer> members;
      for (const auto& c : candidates) {
        if (agg::default_equivalent(c.answer, answer)) members.push_back(c);
      }
      return agg::bon(members);
    }
    case Name::avg:
    case Name::pass_at_k:
      // Score-valued rules have no single selection; fall back to bon.
      return agg::bon(candidates);
  }
  return agg::bon(candidates);
}

TeamResult run_team(const TeamConfig& config, TeamEnv& env, Hub& hub) {
  std::vector<std::string> errors = validate_team_config(config);
  if (!errors.empty()) {
    throw std::invalid_argument("invalid team config: " + errors.front());
  }

  std::vector<AgentState> states;
  states.reserve(config.agents.size());
  for (const auto& agent : config.agents) {
    states.push_back(make_initial_state(agent, *env.tools, config.hub_enabled));
  }

  auto step_env_for = [&](const AgentConfig& agent) {
    StepEnv step_env;
    step_env.task = &config.task;
    step_env.backend = env.backends(agent.backend_ref);
    step_env.hub = &hub;
    step_env.write_model = env.write_model;
    step_env.read_model = env.read_model;
    step_env.tools = env.tools;
    step_env.log = env.log;
    step_env.counter = &env.counter;
    step_env.hub_enabled = config.hub_enabled;
    return step_env;
  };

  if (config.scheduler == SchedulerMode::round_robin) {
    bool progressed = true;
    while (progressed) {
      progressed = false;
      for (auto& state : states) {
        if (state.status != AgentStatus::running) continue;
        StepEnv step_env = step_env_for(state.config);
        state = step_agent(std::move(state), step_env);
        progressed = true;
      }
    }
  } else {
    std::vector<std::thread> workers;
    workers.reserve(states.size());
    for (size_t i = 0; i < states.size(); ++i) {
      workers.emplace_back([&, i]() {
        AgentState& state = states[i];
        StepEnv step_env = step_env_for(state.config);
        while (state.status == AgentStatus::running) {
          state = step_agent(std::move(state), step_env);
        }
      });
    }
    for (auto& worker : workers) worker.join();
  }

  TeamResult result;
  result.agents = std::move(states);
  for (const auto& state : result.agents) {
    if (state.status == AgentStatus::answered && state.final) {
      result.candidates.push_back(*state.final);
    }
  }
  result.selected = select_answer(result.candidates, config.selector);
  result.empty_team_outcome = result.candidates.empty();
  return result;
}

}  // namespace agenthub

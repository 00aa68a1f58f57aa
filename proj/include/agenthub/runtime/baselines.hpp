#pragma once

#include <string>
#include <vector>

#include "agenthub/runtime/team.hpp"

namespace agenthub {

// Meta-agent budget split shared by both baselines: 100 rounds per subagent,
// 50 for the meta-agent, against the peer agents' 150 each.
inline constexpr int kSubagentRoundBudget = 100;
inline constexpr int kMetaRoundBudget = 50;

struct BaselineEnv {
  Backend* meta_backend = nullptr;
  Backend* sub_backend = nullptr;
  const ToolEnv* tools = nullptr;
  EventLog* log = nullptr;
  TokenCounter counter = default_token_counter();
};

// Plan / parallel-search / aggregate: the meta-agent decomposes the question
// into k subtasks, k isolated subagents research them, and the meta-agent
// synthesizes their reports into one final answer.
TeamResult run_naive(const Task& task, int k, BaselineEnv& env);

// Swarm coordination: the meta-agent interleaves its own tool use with
// create_subagent / assign_task dispatches; subagent reports flow only
// through the meta-agent.
TeamResult run_swarm(const Task& task, BaselineEnv& env);

// Lines of the form "Subtask <n>: <text>", in order of appearance.
std::vector<std::string> parse_subtasks(const std::string& content);

}  // namespace agenthub

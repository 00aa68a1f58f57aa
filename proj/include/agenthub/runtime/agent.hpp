#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "agenthub/backends/backend.hpp"
#include "agenthub/core/answer.hpp"
#include "agenthub/core/tokens.hpp"
#include "agenthub/core/types.hpp"
#include "agenthub/hub/hub.hpp"
#include "agenthub/runtime/events.hpp"
#include "agenthub/toolenv/tools.hpp"

namespace agenthub {

inline constexpr int64_t kDefaultContextWindow = 131072;
inline constexpr int64_t kDefaultWriteTrigger = 65536;
inline constexpr int kDefaultRoundBudget = 150;

struct AgentConfig {
  std::string agent_id;
  std::string backend_ref;
  std::string system_prompt;  // empty -> runtime default preamble
  int64_t context_window = kDefaultContextWindow;
  int64_t write_trigger = kDefaultWriteTrigger;
  int round_budget = kDefaultRoundBudget;
  Sampling sampling;
};

enum class AgentStatus { running, answered, exhausted, failed };

std::string to_string(AgentStatus status);

struct AgentState {
  AgentConfig config;
  WorkingContext context;
  int rounds_used = 0;
  int64_t tool_calls = 0;
  AgentStatus status = AgentStatus::running;
  std::optional<CandidateAnswer> final;
  std::string failure_reason;
  int next_step_index = 0;     // trajectory-wide, contiguous across episodes
};

// True iff the full working-context token size has reached the trigger.
bool check_write_trigger(const WorkingContext& context, int64_t trigger_tokens,
                         const TokenCounter& counter);

// Everything one agent turn needs besides its own state.
struct StepEnv {
  const Task* task = nullptr;
  Backend* backend = nullptr;          // the agent's model
  Hub* hub = nullptr;                  // null or hub_enabled=false -> isolated
  Backend* write_model = nullptr;
  Backend* read_model = nullptr;
  const ToolEnv* tools = nullptr;
  EventLog* log = nullptr;
  const TokenCounter* counter = nullptr;
  bool hub_enabled = false;
};

// The prompt as sent to the model, in order: system preamble, teammate notes,
// own notes, readouts, active steps. Tool schemas ride on the request, not
// the prompt text.
std::vector<ChatMessage> assemble_prompt(const AgentState& state, const Task& task,
                                         bool hub_enabled);

int64_t prompt_tokens(const std::vector<ChatMessage>& messages, const TokenCounter& counter);

// One ReAct turn: refresh teammate notes, fire the write trigger if due,
// assemble the prompt, take the model's action (task tool, memory tool, or
// final answer), and account budgets. Returns the successor state.
AgentState step_agent(AgentState state, StepEnv& env);

// The memory tool body: resolves local page numbers against the requester's
// page index and delegates to hub.read. Errors come back as observations.
ToolOutcome memory_tool(const std::string& requester, const std::vector<int>& pages,
                        const std::string& goal, Hub& hub, Backend& read_model,
                        EventLog* log);

std::string default_system_prompt(const ToolEnv& tools, bool hub_enabled);

}  // namespace agenthub

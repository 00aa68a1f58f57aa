#include "agenthub/runtime/baselines.hpp"

#include <cctype>
#include <map>
#include <regex>

namespace agenthub {

using nlohmann::json;

namespace {

const char* kNaiveMetaSystem =
    "You coordinate a research team. First decompose the question into the requested number of "
    "subtasks; afterwards you will receive subagent reports and must synthesize one final answer "
    "in exactly this format:\nExact Answer: <answer>\nConfidence: <integer>%";

const char* kSwarmMetaSystem =
    "You research by directing subagents. Use create_subagent(identifier, system_prompt) to "
    "instantiate a specialized subagent under a stable, reusable identifier, and "
    "assign_task(identifier, task_description) to dispatch a concrete task and receive that "
    "subagent's report. You may also call the task tools yourself. When confident, stop and reply "
    "in exactly this format:\nExact Answer: <answer>\nConfidence: <integer>%";

std::string subagent_report(const AgentState& state, const std::string& assignment) {
  std::string report = "Assignment: " + assignment + "\n";
  switch (state.status) {
    case AgentStatus::answered:
      report += "Status: answered\n" +
                format_final_answer(state.final->answer, state.final->confidence);
      break;
    case AgentStatus::exhausted: {
      report += "Status: exhausted after " + std::to_string(state.rounds_used) + " rounds\n";
      if (!state.context.active.empty()) {
        report += "Last observation: " + state.context.active.back().observation;
      }
      break;
    }
    case AgentStatus::failed:
      report += "Status: failed: " + state.failure_reason;
      break;
    case AgentStatus::running:
      report += "Status: running";
      break;
  }
  return report;
}

AgentState run_subagent(const Task& task, const std::string& agent_id,
                        const std::string& system_prompt, int round_budget, Backend& backend,
                        BaselineEnv& env) {
  AgentConfig config;
  config.agent_id = agent_id;
  config.backend_ref = backend.name();
  config.system_prompt = system_prompt;
  config.round_budget = round_budget;

  AgentState state = make_initial_state(config, *env.tools, /*hub_enabled=*/false);
  StepEnv step_env;
  step_env.task = &task;
  step_env.backend = &backend;
  step_env.tools = env.tools;
  step_env.log = env.log;
  step_env.counter = &env.counter;
  step_env.hub_enabled = false;

  while (state.status == AgentStatus::running) {
    state = step_agent(std::move(state), step_env);
  }
  return state;
}

// Minimal meta conversation: system + task intro + prior (action, observation)
// exchanges.
std::vector<ChatMessage> meta_messages(const std::string& system, const std::string& intro,
                                       const std::vector<TrajectoryStep>& steps) {
  std::vector<ChatMessage> messages;
  messages.push_back({Role::system, system});
  messages.push_back({Role::user, intro});
  for (const auto& step : steps) {
    messages.push_back({Role::assistant, render_action(step.action)});
    messages.push_back({Role::tool, "OBSERVATION: " + step.observation});
  }
  return messages;
}

void log_meta_turn(BaselineEnv& env, const AgentState& meta, const std::string& phase) {
  if (!env.log) return;
  env.log->append(meta.config.agent_id, "turn",
                  {{"round", meta.rounds_used + 1}, {"phase", phase}});
}

void append_meta_step(AgentState& meta, ActionRecord action, std::string observation,
                      const TokenCounter& counter) {
  TrajectoryStep step;
  step.index = meta.next_step_index++;
  step.token_cost = step_token_cost(action, observation, counter);
  step.action = std::move(action);
  step.observation = std::move(observation);
  meta.context.active.push_back(std::move(step));
}

void fail_meta(AgentState& meta, BaselineEnv& env, const std::string& reason,
               const std::string& transcript) {
  meta.status = AgentStatus::failed;
  meta.failure_reason = reason;
  if (env.log) {
    env.log->append(meta.config.agent_id, "status",
                    {{"status", "failed"}, {"error", reason}, {"transcript", transcript}});
  }
}

}  // namespace

std::vector<std::string> parse_subtasks(const std::string& content) {
  static const std::regex line_re(R"(^\s*[Ss]ubtask\s*\d+\s*[:.]\s*(.+?)\s*$)");
  std::vector<std::string> subtasks;
  size_t start = 0;
  while (start <= content.size()) {
    size_t nl = content.find('\n', start);
    std::string line = content.substr(start, nl == std::string::npos ? nl : nl - start);
    std::smatch m;
    if (std::regex_match(line, m, line_re)) subtasks.push_back(m[1].str());
    if (nl == std::string::npos) break;
    start = nl + 1;
  }
  return subtasks;
}

TeamResult run_naive(const Task& task, int k, BaselineEnv& env) {
  if (k < 1) throw std::invalid_argument("run_naive: k must be >= 1");

  TeamResult result;
  AgentConfig meta_config;
  meta_config.agent_id = "meta";
  meta_config.backend_ref = env.meta_backend->name();
  meta_config.round_budget = kMetaRoundBudget;
  AgentState meta;
  meta.config = meta_config;
  meta.context.system_preamble = kNaiveMetaSystem;

  // Phase 1: plan.
  std::string plan_intro = "Question: " + task.question + "\n\nDecompose this question into exactly " +
                           std::to_string(k) +
                           " subtasks for parallel research. Output one line per subtask in the "
                           "form 'Subtask <n>: <description>'.";
  log_meta_turn(env, meta, "plan");
  BackendResult plan = env.meta_backend->chat(
      {.model = "", .messages = meta_messages(kNaiveMetaSystem, plan_intro, {}), .tool_schemas = {},
       .sampling = {}});
  meta.rounds_used += 1;
  if (!plan.ok()) {
    fail_meta(meta, env, "meta decomposition failed: " + plan.error->message, "");
    result.agents.push_back(std::move(meta));
    result.run_error = "meta decomposition failed";
    result.empty_team_outcome = true;
    return result;
  }

  std::vector<std::string> subtasks = parse_subtasks(plan.response->content);
  if (static_cast<int>(subtasks.size()) < k) {
    fail_meta(meta, env,
              "meta decomposition produced " + std::to_string(subtasks.size()) +
                  " subtasks, expected " + std::to_string(k),
              plan.response->content);
    result.agents.push_back(std::move(meta));
    result.run_error = "meta decomposition failed";
    result.empty_team_outcome = true;
    return result;
  }
  subtasks.resize(k);
  {
    ActionRecord action;
    action.reasoning = plan.response->content;
    append_meta_step(meta, std::move(action), "(plan accepted: " + std::to_string(k) + " subtasks)",
                     env.counter);
  }

  // Phase 2: parallel search (isolated subagents, no hub).
  std::vector<std::string> reports;
  for (int i = 0; i < k; ++i) {
    Task sub_task = task;
    sub_task.id = task.id + "/sub-" + std::to_string(i + 1);
    sub_task.question = "Original question: " + task.question + "\nYour subtask: " + subtasks[i];
    AgentState sub = run_subagent(sub_task, "sub-" + std::to_string(i + 1), "",
                                  kSubagentRoundBudget, *env.sub_backend, env);
    reports.push_back(subagent_report(sub, subtasks[i]));
    result.agents.push_back(std::move(sub));
  }

  // Phase 3: aggregate within the meta budget.
  std::string reports_block;
  for (size_t i = 0; i < reports.size(); ++i) {
    reports_block += "--- Report " + std::to_string(i + 1) + " ---\n" + reports[i] + "\n";
  }
  std::string synth_intro = "Question: " + task.question + "\n\nSubagent reports:\n" + reports_block +
                            "\nSynthesize the single best final answer. Reply in exactly this "
                            "format:\nExact Answer: <answer>\nConfidence: <integer>%";

  while (meta.status == AgentStatus::running && meta.rounds_used < kMetaRoundBudget) {
    log_meta_turn(env, meta, "synthesize");
    BackendResult synth = env.meta_backend->chat(
        {.model = "",
         .messages = meta_messages(kNaiveMetaSystem, synth_intro, meta.context.active),
         .tool_schemas = {},
         .sampling = {}});
    meta.rounds_used += 1;
    if (!synth.ok()) {
      fail_meta(meta, env, "meta synthesis failed: " + synth.error->message, "");
      break;
    }
    if (auto fa = parse_final_answer(synth.response->content)) {
      CandidateAnswer candidate{meta.config.agent_id, fa->answer, fa->confidence, meta.tool_calls};
      meta.final = candidate;
      meta.status = AgentStatus::answered;
      if (env.log) {
        env.log->append("meta", "answer",
                        {{"answer", candidate.answer},
                         {"confidence", candidate.confidence},
                         {"tool_calls", candidate.tool_calls}});
        env.log->append("meta", "status", {{"status", "answered"}});
      }
    } else {
      ActionRecord action;
      action.reasoning = synth.response->content;
      append_meta_step(meta, std::move(action),
                       "ERROR: reply with 'Exact Answer:' and 'Confidence:' lines", env.counter);
    }
  }
  if (meta.status == AgentStatus::running) {
    meta.status = AgentStatus::exhausted;
    if (env.log) env.log->append("meta", "status", {{"status", "exhausted"}});
  }

  if (meta.final) {
    result.candidates.push_back(*meta.final);
    result.selected = *meta.final;
  }
  result.empty_team_outcome = result.candidates.empty();
  result.agents.insert(result.agents.begin(), std::move(meta));
  return result;
}

TeamResult run_swarm(const Task& task, BaselineEnv& env) {
  TeamResult result;
  AgentConfig meta_config;
  meta_config.agent_id = "meta";
  meta_config.backend_ref = env.meta_backend->name();
  meta_config.round_budget = kMetaRoundBudget;
  AgentState meta;
  meta.config = meta_config;
  meta.context.system_preamble = kSwarmMetaSystem;

  struct SubagentSlot {
    std::string system_prompt;
    int rounds_spent = 0;
    int assignments = 0;
  };
  std::map<std::string, SubagentSlot> registry;

  std::vector<ToolSchema> schemas = tool_schemas_for(task.tool_profile, /*include_memory=*/false);
  schemas.push_back(create_subagent_schema());
  schemas.push_back(assign_task_schema());

  std::string intro = "Task: " + task.question;

  while (meta.status == AgentStatus::running && meta.rounds_used < kMetaRoundBudget) {
    log_meta_turn(env, meta, "meta");
    BackendResult turn = env.meta_backend->chat(
        {.model = "",
         .messages = meta_messages(kSwarmMetaSystem, intro, meta.context.active),
         .tool_schemas = schemas,
         .sampling = {}});
    meta.rounds_used += 1;
    if (!turn.ok()) {
      fail_meta(meta, env, "meta failed: " + turn.error->message, "");
      break;
    }

    const ChatResponse& response = *turn.response;
    std::optional<ToolCall> call = extract_tool_call(response);
    if (call) {
      meta.tool_calls += 1;
      if (env.log) {
        env.log->append("meta", "tool_call", {{"tool", call->name}, {"arguments", call->arguments}});
      }
      json args = json::parse(call->arguments.empty() ? "{}" : call->arguments, nullptr, false);
      std::string observation;
      bool error = false;

      if (call->name == "create_subagent") {
        std::string id = args.is_object() ? args.value("identifier", "") : "";
        std::string prompt = args.is_object() ? args.value("system_prompt", "") : "";
        if (id.empty()) {
          observation = "ERROR: create_subagent requires an identifier";
          error = true;
        } else {
          auto [it, inserted] = registry.try_emplace(id);
          it->second.system_prompt = prompt;
          observation = inserted ? "subagent '" + id + "' created"
                                 : "subagent '" + id + "' updated (identifier reused)";
        }
      } else if (call->name == "assign_task") {
        std::string id = args.is_object() ? args.value("identifier", "") : "";
        std::string description = args.is_object() ? args.value("task_description", "") : "";
        auto it = registry.find(id);
        if (it == registry.end()) {
          observation = "ERROR: unknown subagent identifier '" + id + "'";
          error = true;
        } else if (it->second.rounds_spent >= kSubagentRoundBudget) {
          observation = "ERROR: subagent '" + id + "' has exhausted its " +
                        std::to_string(kSubagentRoundBudget) + "-round budget";
          error = true;
        } else {
          Task sub_task = task;
          it->second.assignments += 1;
          sub_task.id = task.id + "/" + id + "#" + std::to_string(it->second.assignments);
          sub_task.question = description;
          AgentState sub =
              run_subagent(sub_task, id, it->second.system_prompt,
                           kSubagentRoundBudget - it->second.rounds_spent, *env.sub_backend, env);
          it->second.rounds_spent += sub.rounds_used;
          observation = subagent_report(sub, description);
          result.agents.push_back(std::move(sub));
        }
      } else {
        ToolOutcome outcome = env.tools->dispatch(call->name, call->arguments);
        observation = outcome.observation;
        error = outcome.error;
      }

      if (env.log) {
        env.log->append("meta", "tool_result",
                        {{"tool", call->name}, {"error", error}, {"observation", observation}});
      }
      ActionRecord action;
      action.reasoning = response.content;
      action.tool_name = call->name;
      action.tool_arguments = call->arguments;
      append_meta_step(meta, std::move(action), std::move(observation), env.counter);
    } else if (auto fa = parse_final_answer(response.content)) {
      CandidateAnswer candidate{"meta", fa->answer, fa->confidence, meta.tool_calls};
      meta.final = candidate;
      meta.status = AgentStatus::answered;
      if (env.log) {
        env.log->append("meta", "answer",
                        {{"answer", candidate.answer},
                         {"confidence", candidate.confidence},
                         {"tool_calls", candidate.tool_calls}});
        env.log->append("meta", "status", {{"status", "answered"}});
      }
    } else {
      ActionRecord action;
      action.reasoning = response.content;
      append_meta_step(meta, std::move(action),
                       "ERROR: call a tool or reply with 'Exact Answer:' and 'Confidence:' lines",
                       env.counter);
    }
  }
  if (meta.status == AgentStatus::running) {
    meta.status = AgentStatus::exhausted;
    if (env.log) env.log->append("meta", "status", {{"status", "exhausted"}});
  }

  if (meta.final) {
    result.candidates.push_back(*meta.final);
    result.selected = *meta.final;
  }
  result.empty_team_outcome = result.candidates.empty();
  result.agents.insert(result.agents.begin(), std::move(meta));
  return result;
}

}  // namespace agenthub

#include "agenthub/runtime/agent.hpp"

#include <algorithm>
#include <stdexcept>

namespace agenthub {

using nlohmann::json;

std::string to_string(AgentStatus status) {
  switch (status) {
    case AgentStatus::running:
      return "running";
    case AgentStatus::answered:
      return "answered";
    case AgentStatus::exhausted:
      return "exhausted";
    case AgentStatus::failed:
      return "failed";
  }
  return "running";
}

bool check_write_trigger(const WorkingContext& context, int64_t trigger_tokens,
                         const TokenCounter& counter) {
  return context_tokens(context, counter) >= trigger_tokens;
}

std::string default_system_prompt(const ToolEnv& tools, bool hub_enabled) {
  std::string prompt =
      "You are a research agent. Solve the task by reasoning step by step and calling tools. "
      "Call at most one tool per turn and continue from its observation.\n";
  prompt += "Available tools:";
  for (const auto& name : tools.available_tools()) prompt += " " + name;
  if (hub_enabled) prompt += " memory";
  prompt += ".\n";
  if (hub_enabled) {
    prompt +=
        "Your team shares an Exploration Memory: page summaries of completed episodes appear in "
        "your prompt, and the memory tool recovers raw details from the pages you select.\n";
  }
  prompt +=
      "When you are confident, stop calling tools and reply with your final answer in exactly "
      "this format:\nExact Answer: <your answer>\nConfidence: <integer>%";
  return prompt;
}

std::vector<ChatMessage> assemble_prompt(const AgentState& state, const Task& task,
                                         bool hub_enabled) {
  std::vector<ChatMessage> messages;
  messages.push_back({Role::system, state.context.system_preamble});

  std::string body = "Task: " + task.question + "\n";

  if (hub_enabled) {
    // Merge own and teammate notes by hub timestamp; positions are the local
    // page numbers the memory tool resolves.
    std::vector<const EpisodeNote*> pages;
    for (const auto& note : state.context.own_notes) pages.push_back(&note);
    for (const auto& note : state.context.teammate_notes) pages.push_back(&note);
    std::sort(pages.begin(), pages.end(),
              [](const EpisodeNote* a, const EpisodeNote* b) { return a->created_at < b->created_at; });

    body += "\n## Exploration Memory\n";
    if (pages.empty()) {
      body += "(no pages yet)\n";
    } else {
      body +=
          "Completed episode pages from your team. Pass the bracketed page numbers to the memory "
          "tool to read raw content.\n";
      for (size_t i = 0; i < pages.size(); ++i) {
        const EpisodeNote* note = pages[i];
        body += "[" + std::to_string(i + 1) + "] (agent=" + note->episode_ref.owner +
                ", page=" + std::to_string(note->episode_ref.ordinal) + ")";
        if (note->episode_ref.owner == state.config.agent_id) body += " (yours)";
        if (note->degraded) body += " (degraded)";
        body += "\n" + note->summary + "\n";
      }
    }
  }

  if (!state.context.readouts.empty()) {
    body += "\n## Readouts\n";
    for (size_t i = 0; i < state.context.readouts.size(); ++i) {
      body += "[readout " + std::to_string(i + 1) + "]\n" + state.context.readouts[i] + "\n";
    }
  }

  messages.push_back({Role::user, body});

  for (const auto& step : state.context.active) {
    messages.push_back({Role::assistant, render_action(step.action)});
    messages.push_back({Role::tool, "OBSERVATION: " + step.observation});
  }
  return messages;
}

int64_t prompt_tokens(const std::vector<ChatMessage>& messages, const TokenCounter& counter) {
  int64_t total = 0;
  for (const auto& m : messages) total += counter(m.content);
  return total;
}

ToolOutcome memory_tool(const std::string& requester, const std::vector<int>& pages,
                        const std::string& goal, Hub& hub, Backend& read_model, EventLog* log) {
  // Argument validation happens before any hub access.
  if (pages.empty() || pages.size() > kMaxReadRefs) {
    return {"ERROR: memory requires between 1 and " + std::to_string(kMaxReadRefs) +
                " page numbers, got " + std::to_string(pages.size()),
            true};
  }
  if (goal.empty()) {
    return {"ERROR: memory requires a nonempty goal", true};
  }

  std::vector<EpisodeNote> index = hub.page_index(requester);
  ReadRequest request;
  request.requester = requester;
  request.intent = goal;
  for (int page : pages) {
    if (page < 1 || static_cast<size_t>(page) > index.size()) {
      return {"ERROR: unknown page " + std::to_string(page) + " (Exploration Memory has " +
                  std::to_string(index.size()) + " pages)",
              true};
    }
    request.refs.push_back(index[static_cast<size_t>(page) - 1].episode_ref);
  }

  std::string readout;
  try {
    readout = hub.read(request, read_model);
  } catch (const HubError& e) {
    return {std::string("ERROR: ") + e.what(), true};
  }

  if (log) {
    json refs = json::array();
    for (const auto& ref : request.refs) {
      refs.push_back({{"owner", ref.owner}, {"ordinal", ref.ordinal}});
    }
    log->append(requester, "hub_read",
                {{"intent", goal}, {"pages", pages}, {"refs", refs}, {"readout", readout}});
  }
  return {readout, false};
}

namespace {

// Drops oldest readouts, then oldest teammate notes, while the non-active
// parts alone exceed the trigger. Own notes are never dropped.
void relieve_note_overflow(AgentState& state, const TokenCounter& counter) {
  auto non_active_tokens = [&]() {
    WorkingContext probe = state.context;
    probe.active.clear();
    return context_tokens(probe, counter);
  };
  while (non_active_tokens() >= state.config.write_trigger &&
         !state.context.readouts.empty()) {
    state.context.readouts.erase(state.context.readouts.begin());
  }
  while (non_active_tokens() >= state.config.write_trigger &&
         !state.context.teammate_notes.empty()) {
    state.context.teammate_notes.erase(state.context.teammate_notes.begin());
  }
}

Episode close_active_episode(const AgentState& state, Hub& hub) {
  Episode episode;
  episode.owner = state.config.agent_id;
  episode.ordinal = hub.max_ordinal(state.config.agent_id) + 1;
  episode.steps = state.context.active;
  episode.token_total = episode_token_total(episode);
  return episode;
}

void log_hub_write(EventLog* log, const std::string& agent_id, const WriteOutcome& outcome,
                   const Episode& episode, const TokenCounter& counter) {
  if (!log) return;
  log->append(agent_id, "hub_write",
              {{"owner", outcome.ref.owner},
               {"ordinal", outcome.ref.ordinal},
               {"episode_tokens", episode.token_total},
               {"note_tokens", counter(outcome.note.summary)},
               {"note_summary", outcome.note.summary},
               {"degraded", outcome.note.degraded},
               {"terminal", outcome.note.terminal}});
}

void append_step(AgentState& state, ActionRecord action, std::string observation,
                 const TokenCounter& counter) {
  TrajectoryStep step;
  step.index = state.next_step_index++;
  step.token_cost = step_token_cost(action, observation, counter);
  step.action = std::move(action);
  step.observation = std::move(observation);
  state.context.active.push_back(std::move(step));
}

std::vector<int> parse_pages_argument(const json& args) {
  std::vector<int> pages;
  if (args.contains("pages") && args.at("pages").is_array()) {
    for (const auto& p : args.at("pages")) {
      if (p.is_number_integer()) pages.push_back(p.get<int>());
    }
  }
  return pages;
}

}  // namespace

AgentState step_agent(AgentState state, StepEnv& env) {
  if (state.status != AgentStatus::running) {
    throw std::logic_error("step_agent: agent is not running");
  }
  if (state.rounds_used >= state.config.round_budget) {
    throw std::logic_error("step_agent: round budget already spent");
  }
  const TokenCounter& counter = *env.counter;
  const bool hub_on = env.hub_enabled && env.hub != nullptr;

  // Teammate notes refresh at the turn boundary.
  if (hub_on) {
    state.context.teammate_notes = env.hub->visible_notes(state.config.agent_id);
    relieve_note_overflow(state, counter);
  }

  int64_t pre_tokens = context_tokens(state.context, counter);
  bool trigger_fired = check_write_trigger(state.context, state.config.write_trigger, counter);
  bool evicted = false;
  std::optional<WriteOutcome> wrote;
  Episode written_episode;

  if (trigger_fired && hub_on && !state.context.active.empty()) {
    written_episode = close_active_episode(state, *env.hub);
    wrote = env.hub->write_episode(written_episode, *env.write_model);
    state.context = evict_and_replace(state.context, wrote->ref, wrote->note);
    evicted = true;
  }

  std::vector<ChatMessage> messages = assemble_prompt(state, *env.task, hub_on);
  int64_t pt = prompt_tokens(messages, counter);

  if (env.log) {
    env.log->append(state.config.agent_id, "turn",
                    {{"round", state.rounds_used + 1},
                     {"context_tokens_pre", pre_tokens},
                     {"trigger_fired", trigger_fired},
                     {"evicted", evicted},
                     {"context_tokens", context_tokens(state.context, counter)},
                     {"prompt_tokens", pt},
                     {"own_note_count", state.context.own_notes.size()},
                     {"teammate_note_count", state.context.teammate_notes.size()},
                     {"readout_count", state.context.readouts.size()}});
  }
  if (wrote) log_hub_write(env.log, state.config.agent_id, *wrote, written_episode, counter);

  ChatRequest request;
  request.messages = std::move(messages);
  request.tool_schemas = tool_schemas_for(env.task->tool_profile, hub_on);
  request.sampling = state.config.sampling;

  BackendResult result = env.backend->chat(request);
  state.rounds_used += 1;

  if (!result.ok()) {
    state.status = AgentStatus::failed;
    state.failure_reason = to_string(result.error->kind) + ": " + result.error->message;
    if (env.log) {
      env.log->append(state.config.agent_id, "status",
                      {{"status", "failed"},
                       {"error_kind", to_string(result.error->kind)},
                       {"error", result.error->message}});
    }
    return state;
  }

  const ChatResponse& response = *result.response;
  std::optional<ToolCall> call = extract_tool_call(response);

  if (call) {
    state.tool_calls += 1;
    if (env.log) {
      env.log->append(state.config.agent_id, "tool_call",
                      {{"tool", call->name}, {"arguments", call->arguments}});
    }

    ToolOutcome outcome;
    std::string step_observation;
    if (call->name == "memory") {
      if (!hub_on) {
        outcome = {"ERROR: the memory tool is not available (no shared hub in this run)", true};
        step_observation = outcome.observation;
      } else {
        json args = json::parse(call->arguments.empty() ? "{}" : call->arguments, nullptr, false);
        if (args.is_discarded() || !args.is_object()) {
          outcome = {"ERROR: memory arguments are not a JSON object", true};
          step_observation = outcome.observation;
        } else {
          std::vector<int> pages = parse_pages_argument(args);
          std::string goal = args.value("goal", "");
          outcome = memory_tool(state.config.agent_id, pages, goal, *env.hub, *env.read_model,
                                env.log);
          if (!outcome.error) {
            // The full readout lives in the Readouts section; the step keeps
            // a marker so the content is counted once.
            state.context.readouts.push_back(outcome.observation);
            step_observation =
                "(readout " + std::to_string(state.context.readouts.size()) +
                " added to the Readouts section)";
          } else {
            step_observation = outcome.observation;
          }
        }
      }
    } else {
      outcome = env.tools->dispatch(call->name, call->arguments);
      step_observation = outcome.observation;
    }

    if (env.log) {
      env.log->append(state.config.agent_id, "tool_result",
                      {{"tool", call->name}, {"error", outcome.error}, {"observation", step_observation}});
    }

    ActionRecord action;
    action.reasoning = response.content;
    action.tool_name = call->name;
    action.tool_arguments = call->arguments;
    append_step(state, std::move(action), std::move(step_observation), counter);
  } else if (auto fa = parse_final_answer(response.content)) {
    CandidateAnswer candidate;
    candidate.agent_id = state.config.agent_id;
    candidate.answer = fa->answer;
    candidate.confidence = fa->confidence;
    candidate.tool_calls = state.tool_calls;
    state.final = candidate;
    state.status = AgentStatus::answered;

    if (env.log) {
      env.log->append(state.config.agent_id, "answer",
                      {{"answer", candidate.answer},
                       {"confidence", candidate.confidence},
                       {"tool_calls", candidate.tool_calls}});
    }

    // Flush the last partial episode so teammates can still read it.
    if (hub_on && !state.context.active.empty()) {
      Episode episode = close_active_episode(state, *env.hub);
      WriteOutcome outcome = env.hub->write_episode(episode, *env.write_model, /*terminal=*/true);
      state.context = evict_and_replace(state.context, outcome.ref, outcome.note);
      log_hub_write(env.log, state.config.agent_id, outcome, episode, counter);
    }
    if (env.log) {
      env.log->append(state.config.agent_id, "status", {{"status", "answered"}});
    }
  } else {
    // Neither a tool call nor a committed answer; surface the mistake.
    std::string observation =
        "ERROR: the reply contained no tool call and no 'Exact Answer:' line; call a tool or "
        "answer in the required format";
    if (env.log) {
      env.log->append(state.config.agent_id, "tool_result",
                      {{"tool", "none"}, {"error", true}, {"observation", observation}});
    }
    ActionRecord action;
    action.reasoning = response.content;
    append_step(state, std::move(action), std::move(observation), counter);
  }

  if (state.status == AgentStatus::running && state.rounds_used >= state.config.round_budget) {
    state.status = AgentStatus::exhausted;
    if (env.log) {
      env.log->append(state.config.agent_id, "status", {{"status", "exhausted"}});
    }
  }
  return state;
}

}  // namespace agenthub

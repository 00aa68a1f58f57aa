#include "agenthub/core/tokens.hpp"

#include <algorithm>

namespace agenthub {

std::string to_string(ToolProfile profile) {
  switch (profile) {
    case ToolProfile::web:
      return "web";
    case ToolProfile::web_python_scholar:
      return "web+python+scholar";
  }
  return "web";
}

ToolProfile tool_profile_from_string(const std::string& s) {
  if (s == "web+python+scholar" || s == "web_python_scholar") {
    return ToolProfile::web_python_scholar;
  }
  return ToolProfile::web;
}

int64_t default_count_tokens(std::string_view text) {
  return static_cast<int64_t>((text.size() + 3) / 4);
}

const TokenCounter& default_token_counter() {
  static const TokenCounter counter = [](std::string_view text) {
    return default_count_tokens(text);
  };
  return counter;
}

std::string truncate_to_tokens(std::string_view text, int64_t max_tokens,
                               const TokenCounter& counter) {
  if (max_tokens <= 0) return "";
  if (counter(text) <= max_tokens) return std::string(text);
  // Binary search the longest prefix within budget; valid because the
  // counter is monotone under concatenation.
  size_t lo = 0, hi = text.size();
  while (lo < hi) {
    size_t mid = (lo + hi + 1) / 2;
    if (counter(text.substr(0, mid)) <= max_tokens) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return std::string(text.substr(0, lo));
}

std::string render_action(const ActionRecord& action) {
  std::string out = action.reasoning;
  if (action.tool_name) {
    if (!out.empty()) out += "\n";
    out += "TOOL: " + *action.tool_name;
    if (!action.tool_arguments.empty()) {
      out += " ARGS: " + action.tool_arguments;
    }
  }
  return out;
}

int64_t step_token_cost(const ActionRecord& action, std::string_view observation,
                        const TokenCounter& counter) {
  return counter(render_action(action)) + counter(observation);
}

int64_t episode_token_total(const Episode& episode) {
  int64_t total = 0;
  for (const auto& step : episode.steps) total += step.token_cost;
  return total;
}

int64_t context_tokens(const WorkingContext& ctx, const TokenCounter& counter) {
  int64_t total = counter(ctx.system_preamble);
  for (const auto& note : ctx.own_notes) total += counter(note.summary);
  for (const auto& note : ctx.teammate_notes) total += counter(note.summary);
  for (const auto& readout : ctx.readouts) total += counter(readout);
  for (const auto& step : ctx.active) total += step.token_cost;
  return total;
}

}  // namespace agenthub

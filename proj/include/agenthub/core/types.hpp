#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace agenthub {

// Which tools the runtime exposes for a task.
enum class ToolProfile {
  web,                 // search + visit
  web_python_scholar,  // search + visit + python + scholar
};

std::string to_string(ToolProfile profile);
ToolProfile tool_profile_from_string(const std::string& s);

struct Task {
  std::string id;
  std::string question;
  std::optional<std::string> gold_answer;
  ToolProfile tool_profile = ToolProfile::web;
};

// One model action: free-text reasoning plus an optional tool invocation.
struct ActionRecord {
  std::string reasoning;
  std::optional<std::string> tool_name;
  std::string tool_arguments;  // serialized JSON, empty when no tool
};

struct TrajectoryStep {
  int index = 0;  // contiguous from 0 within a trajectory
  ActionRecord action;
  std::string observation;
  int64_t token_cost = 0;
};

struct EpisodeRef {
  std::string owner;
  int ordinal = 0;  // 1-based page number per owner

  auto operator<=>(const EpisodeRef&) const = default;
};

// A contiguous chunk of one agent's interaction history, closed when the
// context budget is hit.
struct Episode {
  std::string owner;
  int ordinal = 0;
  std::vector<TrajectoryStep> steps;
  int64_t token_total = 0;

  EpisodeRef ref() const { return EpisodeRef{owner, ordinal}; }
};

struct EpisodeNote {
  EpisodeRef episode_ref;
  std::string summary;
  int64_t created_at = 0;  // hub logical timestamp
  bool degraded = false;   // fallback summary after a write-model failure
  bool terminal = false;   // flushed when the owner answered
};

// The agent prompt state: own notes, teammates' notes, readouts, and the
// active (unsummarized) segment.
struct WorkingContext {
  std::string system_preamble;
  std::vector<EpisodeNote> own_notes;       // ordinal order
  std::vector<EpisodeNote> teammate_notes;  // hub write order
  std::vector<std::string> readouts;
  std::vector<TrajectoryStep> active;
};

struct CandidateAnswer {
  std::string agent_id;
  std::string answer;
  double confidence = 0.5;  // in [0,1]
  int64_t tool_calls = 0;
};

}  // namespace agenthub

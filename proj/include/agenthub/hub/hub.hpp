#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "agenthub/backends/backend.hpp"
#include "agenthub/core/tokens.hpp"
#include "agenthub/core/types.hpp"

namespace agenthub {

class HubError : public std::runtime_error {
 public:
  explicit HubError(const std::string& what) : std::runtime_error(what) {}
};

// Intent-driven read request: what is needed and which raw episodes to
// synthesize it from.
struct ReadRequest {
  std::string requester;
  std::string intent;                 // the goal driving the synthesis
  std::vector<EpisodeRef> refs;       // 1..5 distinct episode references
  std::optional<std::string> prior_summary;
};

inline constexpr size_t kMaxReadRefs = 5;

// Deterministic text form of an episode fed to the write/read models. The
// read path always receives this raw content, never the note.
std::string render_episode(const Episode& episode);

struct WriteOutcome {
  EpisodeRef ref;
  EpisodeNote note;
};

// The shared reasoning hub: append-only raw-episode storage plus the note
// index visible to the team. write_episode and read are linearizable; the
// write model runs outside the storage lock so concurrent writers only
// serialize on the linearization point itself.
class Hub {
 public:
  explicit Hub(TokenCounter counter = default_token_counter())
      : counter_(std::move(counter)) {}

  // Stores the raw episode, asks the write model for its note, indexes the
  // note. A write-model failure degrades to a truncated fallback summary; the
  // raw episode is stored either way. Throws HubError on an empty episode or
  // a non-consecutive ordinal.
  WriteOutcome write_episode(const Episode& episode, Backend& write_model,
                             bool terminal = false);

  // Folds the referenced raw episodes through the incremental consult
  // template in (owner, ordinal) ascending order, threading the running
  // summary, and returns the final synthesis. Throws HubError on an empty or
  // oversized ref set, an unknown ref, or a read-model failure.
  std::string read(const ReadRequest& request, Backend& read_model) const;

  // All teammates' notes (owner != requester) in hub write order.
  std::vector<EpisodeNote> visible_notes(const std::string& requester) const;

  // The requester's page index: every note it can see in its prompt (own and
  // teammates'), in hub write order. memory-tool page integers resolve
  // 1-based into this list.
  std::vector<EpisodeNote> page_index(const std::string& requester) const;

  std::optional<Episode> episode(const EpisodeRef& ref) const;
  std::optional<EpisodeNote> note(const EpisodeRef& ref) const;
  int max_ordinal(const std::string& owner) const;
  size_t episode_count() const;
  size_t note_count() const;
  size_t write_log_size() const;
  std::vector<std::pair<int64_t, EpisodeRef>> write_log() const;

  // Persists episodes/<owner>/<ordinal>.jsonl (one step per line) and
  // notes.jsonl (one note per line, write order) under dir.
  void persist(const std::string& dir) const;

  const TokenCounter& counter() const { return counter_; }

  // Tokens kept by the degraded-write fallback summary.
  static constexpr int64_t kDegradedSummaryTokens = 512;

 private:
  TokenCounter counter_;
  mutable std::mutex mu_;
  std::map<std::pair<std::string, int>, Episode> episodes_;
  std::map<std::pair<std::string, int>, EpisodeNote> notes_;
  std::vector<std::pair<int64_t, EpisodeRef>> write_log_;
  int64_t clock_ = 0;
};

// Pure context-eviction step: the active segment (which must equal the
// written episode's steps) is replaced by its note in own_notes.
WorkingContext evict_and_replace(const WorkingContext& context, const EpisodeRef& ref,
                                 const EpisodeNote& note);

nlohmann::json step_to_json(const TrajectoryStep& step);
TrajectoryStep step_from_json(const nlohmann::json& j);
nlohmann::json note_to_json(const EpisodeNote& note);
EpisodeNote note_from_json(const nlohmann::json& j);

}  // namespace agenthub

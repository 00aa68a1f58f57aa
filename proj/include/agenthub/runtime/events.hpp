#pragma once

#include <cstdint>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

namespace agenthub {

// One line of the run's event stream. Kinds: turn, tool_call, tool_result,
// hub_write, hub_read, answer, status.
struct Event {
  int64_t seq = 0;
  double wall_time = 0.0;  // seconds since epoch; normalized to 0 for replay comparison
  std::string agent_id;
  std::string kind;
  nlohmann::json payload;
};

nlohmann::json event_to_json(const Event& event);
Event event_from_json(const nlohmann::json& j);

// Append-only, totally ordered event stream shared by all agents of a run.
class EventLog {
 public:
  int64_t append(const std::string& agent_id, const std::string& kind, nlohmann::json payload);

  std::vector<Event> events() const;
  size_t size() const;

  void write_jsonl(const std::string& path) const;
  static std::vector<Event> read_jsonl(const std::string& path);

  // One JSONL blob with wall_time zeroed; byte-compared by the determinism
  // and replay checks.
  static std::string normalized_jsonl(const std::vector<Event>& events);

 private:
  mutable std::mutex mu_;
  std::vector<Event> events_;
  int64_t next_seq_ = 1;
};

}  // namespace agenthub

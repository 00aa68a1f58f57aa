#include "agenthub/runtime/events.hpp"

#include <chrono>
#include <fstream>
#include <stdexcept>

namespace agenthub {

nlohmann::json event_to_json(const Event& event) {
  nlohmann::json j;
  j["seq"] = event.seq;
  j["wall_time"] = event.wall_time;
  j["agent_id"] = event.agent_id;
  j["kind"] = event.kind;
  j["payload"] = event.payload;
  return j;
}

Event event_from_json(const nlohmann::json& j) {
  Event event;
  event.seq = j.at("seq").get<int64_t>();
  event.wall_time = j.value("wall_time", 0.0);
  event.agent_id = j.value("agent_id", "");
  event.kind = j.value("kind", "");
  event.payload = j.value("payload", nlohmann::json::object());
  return event;
}

int64_t EventLog::append(const std::string& agent_id, const std::string& kind,
                         nlohmann::json payload) {
  std::lock_guard<std::mutex> lock(mu_);
  Event event;
  event.seq = next_seq_++;
  event.wall_time =
      std::chrono::duration<double>(std::chrono::system_clock::now().time_since_epoch()).count();
  event.agent_id = agent_id;
  event.kind = kind;
  event.payload = std::move(payload);
  events_.push_back(std::move(event));
  return events_.back().seq;
}

std::vector<Event> EventLog::events() const {
  std::lock_guard<std::mutex> lock(mu_);
  return events_;
}

size_t EventLog::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return events_.size();
}

void EventLog::write_jsonl(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write event log: " + path);
  for (const auto& event : events()) {
    out << event_to_json(event).dump() << "\n";
  }
}

std::vector<Event> EventLog::read_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read event log: " + path);
  std::vector<Event> events;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    events.push_back(event_from_json(nlohmann::json::parse(line)));
  }
  return events;
}

std::string EventLog::normalized_jsonl(const std::vector<Event>& events) {
  std::string out;
  for (Event event : events) {
    event.wall_time = 0.0;
    out += event_to_json(event).dump();
    out += "\n";
  }
  return out;
}

}  // namespace agenthub

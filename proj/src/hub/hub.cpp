#include "agenthub/hub/hub.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include "agenthub/hub/prompts.hpp"

namespace agenthub {

namespace fs = std::filesystem;

std::string render_episode(const Episode& episode) {
  std::string out;
  for (const auto& step : episode.steps) {
    out += "[step " + std::to_string(step.index) + "]\n";
    out += render_action(step.action);
    out += "\nOBSERVATION: " + step.observation + "\n";
  }
  return out;
}

WriteOutcome Hub::write_episode(const Episode& episode, Backend& write_model, bool terminal) {
  if (episode.steps.empty()) {
    throw HubError("write_episode: episode has no steps");
  }

  Episode stored = episode;
  int64_t created_at = 0;
  {
    std::lock_guard<std::mutex> lock(mu_);
    int expected = 1;
    auto key = std::make_pair(episode.owner, 0);
    for (auto it = episodes_.lower_bound(key); it != episodes_.end() && it->first.first == episode.owner;
         ++it) {
      expected = it->first.second + 1;
    }
    if (episode.ordinal != expected) {
      throw HubError("write_episode: ordinal " + std::to_string(episode.ordinal) + " for owner '" +
                     episode.owner + "' violates the append protocol (expected " +
                     std::to_string(expected) + ")");
    }
    created_at = ++clock_;
    episodes_.emplace(std::make_pair(episode.owner, episode.ordinal), stored);
    write_log_.emplace_back(created_at, stored.ref());
  }

  // Summarize outside the lock; storage is already linearized.
  ChatRequest request;
  request.messages.push_back({Role::system, std::string(prompts::kMemoryManagerSystem)});
  request.messages.push_back({Role::user, prompts::fill_window_summary(render_episode(stored))});
  BackendResult result = write_model.chat(request);

  EpisodeNote note;
  note.episode_ref = stored.ref();
  note.created_at = created_at;
  note.terminal = terminal;
  if (result.ok() && !result.response->content.empty()) {
    note.summary = result.response->content;
  } else {
    // Progress must survive a summarizer failure: fall back to the leading
    // action texts, flagged degraded.
    std::string actions;
    for (const auto& step : stored.steps) {
      if (!actions.empty()) actions += "\n";
      actions += render_action(step.action);
    }
    note.summary = truncate_to_tokens(actions, kDegradedSummaryTokens, counter_);
    if (note.summary.empty()) note.summary = "(episode with no action text)";
    note.degraded = true;
  }

  {
    std::lock_guard<std::mutex> lock(mu_);
    notes_.emplace(std::make_pair(note.episode_ref.owner, note.episode_ref.ordinal), note);
  }
  return WriteOutcome{stored.ref(), note};
}

std::string Hub::read(const ReadRequest& request, Backend& read_model) const {
  if (request.refs.empty()) {
    throw HubError("read: no episode refs given");
  }
  std::set<EpisodeRef> distinct(request.refs.begin(), request.refs.end());
  if (distinct.size() > kMaxReadRefs) {
    throw HubError("read: " + std::to_string(distinct.size()) + " refs exceed the limit of " +
                   std::to_string(kMaxReadRefs));
  }

  std::vector<Episode> pages;
  {
    std::lock_guard<std::mutex> lock(mu_);
    for (const auto& ref : distinct) {  // std::set is (owner, ordinal) ascending
      auto it = episodes_.find(std::make_pair(ref.owner, ref.ordinal));
      if (it == episodes_.end()) {
        throw HubError("read: unknown episode (" + ref.owner + ", " + std::to_string(ref.ordinal) +
                       ")");
      }
      pages.push_back(it->second);
    }
  }

  std::string running = request.prior_summary.value_or("");
  for (const auto& page : pages) {
    ChatRequest chat;
    chat.messages.push_back({Role::system, std::string(prompts::kConsultSystem)});
    chat.messages.push_back(
        {Role::user, prompts::fill_consult_incremental(request.intent, running, render_episode(page))});
    BackendResult result = read_model.chat(chat);
    if (!result.ok()) {
      throw HubError("read: read model failed on (" + page.owner + ", " +
                     std::to_string(page.ordinal) + "): " + result.error->message);
    }
    running = result.response->content;
  }
  return running;
}

std::vector<EpisodeNote> Hub::visible_notes(const std::string& requester) const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<EpisodeNote> out;
  for (const auto& [ts, ref] : write_log_) {
    if (ref.owner == requester) continue;
    auto it = notes_.find(std::make_pair(ref.owner, ref.ordinal));
    if (it != notes_.end()) out.push_back(it->second);  // skip in-flight writes
  }
  return out;
}

std::vector<EpisodeNote> Hub::page_index(const std::string&) const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<EpisodeNote> out;
  for (const auto& [ts, ref] : write_log_) {
    auto it = notes_.find(std::make_pair(ref.owner, ref.ordinal));
    if (it != notes_.end()) out.push_back(it->second);
  }
  return out;
}

std::optional<Episode> Hub::episode(const EpisodeRef& ref) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = episodes_.find(std::make_pair(ref.owner, ref.ordinal));
  if (it == episodes_.end()) return std::nullopt;
  return it->second;
}

std::optional<EpisodeNote> Hub::note(const EpisodeRef& ref) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = notes_.find(std::make_pair(ref.owner, ref.ordinal));
  if (it == notes_.end()) return std::nullopt;
  return it->second;
}

int Hub::max_ordinal(const std::string& owner) const {
  std::lock_guard<std::mutex> lock(mu_);
  int max = 0;
  for (auto it = episodes_.lower_bound(std::make_pair(owner, 0));
       it != episodes_.end() && it->first.first == owner; ++it) {
    max = it->first.second;
  }
  return max;
}

size_t Hub::episode_count() const {
  std::lock_guard<std::mutex> lock(mu_);
  return episodes_.size();
}

size_t Hub::note_count() const {
  std::lock_guard<std::mutex> lock(mu_);
  return notes_.size();
}

size_t Hub::write_log_size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return write_log_.size();
}

std::vector<std::pair<int64_t, EpisodeRef>> Hub::write_log() const {
  std::lock_guard<std::mutex> lock(mu_);
  return write_log_;
}

void Hub::persist(const std::string& dir) const {
  std::lock_guard<std::mutex> lock(mu_);
  fs::create_directories(fs::path(dir) / "episodes");
  for (const auto& [key, episode] : episodes_) {
    fs::path owner_dir = fs::path(dir) / "episodes" / key.first;
    fs::create_directories(owner_dir);
    std::ofstream out(owner_dir / (std::to_string(key.second) + ".jsonl"));
    for (const auto& step : episode.steps) {
      out << step_to_json(step).dump() << "\n";
    }
  }
  std::ofstream notes_out(fs::path(dir) / "notes.jsonl");
  for (const auto& [ts, ref] : write_log_) {
    auto it = notes_.find(std::make_pair(ref.owner, ref.ordinal));
    if (it != notes_.end()) notes_out << note_to_json(it->second).dump() << "\n";
  }
}

WorkingContext evict_and_replace(const WorkingContext& context, const EpisodeRef& ref,
                                 const EpisodeNote& note) {
  if (context.active.empty()) {
    throw HubError("evict_and_replace: active segment is empty");
  }
  if (note.episode_ref != ref) {
    throw HubError("evict_and_replace: note does not belong to episode (" + ref.owner + ", " +
                   std::to_string(ref.ordinal) + ")");
  }
  WorkingContext next = context;
  next.active.clear();
  next.own_notes.push_back(note);
  return next;
}

nlohmann::json step_to_json(const TrajectoryStep& step) {
  nlohmann::json j;
  j["index"] = step.index;
  j["reasoning"] = step.action.reasoning;
  if (step.action.tool_name) {
    j["tool"] = *step.action.tool_name;
    j["arguments"] = step.action.tool_arguments;
  }
  j["observation"] = step.observation;
  j["token_cost"] = step.token_cost;
  return j;
}

TrajectoryStep step_from_json(const nlohmann::json& j) {
  TrajectoryStep step;
  step.index = j.value("index", 0);
  step.action.reasoning = j.value("reasoning", "");
  if (j.contains("tool")) {
    step.action.tool_name = j.at("tool").get<std::string>();
    step.action.tool_arguments = j.value("arguments", "");
  }
  step.observation = j.value("observation", "");
  step.token_cost = j.value("token_cost", int64_t{0});
  return step;
}

nlohmann::json note_to_json(const EpisodeNote& note) {
  nlohmann::json j;
  j["owner"] = note.episode_ref.owner;
  j["ordinal"] = note.episode_ref.ordinal;
  j["summary"] = note.summary;
  j["created_at"] = note.created_at;
  j["degraded"] = note.degraded;
  j["terminal"] = note.terminal;
  return j;
}

EpisodeNote note_from_json(const nlohmann::json& j) {
  EpisodeNote note;
  note.episode_ref.owner = j.value("owner", "");
  note.episode_ref.ordinal = j.value("ordinal", 0);
  note.summary = j.value("summary", "");
  note.created_at = j.value("created_at", int64_t{0});
  note.degraded = j.value("degraded", false);
  note.terminal = j.value("terminal", false);
  return note;
}

}  // namespace agenthub

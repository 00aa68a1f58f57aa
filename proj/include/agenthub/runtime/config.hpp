#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "agenthub/backends/http.hpp"
#include "agenthub/backends/scripted.hpp"
#include "agenthub/runtime/baselines.hpp"
#include "agenthub/runtime/team.hpp"

namespace agenthub {

inline constexpr const char* kCodeVersion = "0.1.0";

struct BackendConfig {
  std::string type;  // "scripted" | "http"
  std::vector<ScriptRule> script;
  EndpointConfig endpoint;
};

// One declarative file describing a run: task, team, backends, budgets,
// selector, output directory. The manifest embeds a self-contained snapshot
// (scripts, corpus, stubs inlined) so a scripted replay needs nothing else.
struct RunConfig {
  std::string mode = "team";  // team | naive | swarm
  std::string out_dir = "run_out";
  TeamConfig team;
  int naive_k = 2;
  std::string meta_backend;
  std::string sub_backend;
  std::string hub_write_backend;
  std::string hub_read_backend;
  std::map<std::string, BackendConfig> backends;
  std::string corpus_path;
  nlohmann::json corpus_inline;  // array of {url,title,body}; wins over path
  std::vector<std::pair<std::string, std::string>> python_stubs;
  std::vector<std::pair<std::string, std::string>> scholar_stubs;
  int search_top_k = 10;
};

RunConfig run_config_from_json(const nlohmann::json& j);
nlohmann::json run_config_to_json(const RunConfig& config);  // self-contained snapshot
RunConfig load_run_config(const std::string& path);

// Field-path-tagged problems; empty means runnable.
std::vector<std::string> validate_run_config(const RunConfig& config);

// Owns the configured backend instances.
class BackendRegistry {
 public:
  explicit BackendRegistry(const std::map<std::string, BackendConfig>& configs);

  Backend* resolve(const std::string& name) const;
  ScriptedBackend* scripted(const std::string& name) const;
  std::vector<std::string> names() const;

 private:
  std::map<std::string, std::unique_ptr<Backend>> backends_;
};

struct RunOutcome {
  TeamResult result;
  std::vector<Event> events;
  nlohmann::json manifest;
  std::string run_dir;
};

// Executes a config end to end and persists events.jsonl, hub/, and
// manifest.json under the run directory.
RunOutcome execute_run(const RunConfig& config, const std::string& out_dir_override = "");

struct ReplayOutcome {
  bool identical = false;
  std::string original_normalized;
  std::string replayed_normalized;
};

// Re-drives the scripted backends from the manifest's config snapshot and
// byte-compares the normalized event logs.
ReplayOutcome replay_run(const std::string& run_dir);

nlohmann::json aggregate_scores_for(const std::vector<CandidateAnswer>& candidates,
                                    const std::optional<std::string>& gold);

}  // namespace agenthub

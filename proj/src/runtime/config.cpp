#include "agenthub/runtime/config.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace agenthub {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

AgentConfig agent_config_from_json(const json& j) {
  AgentConfig agent;
  agent.agent_id = j.value("agent_id", "");
  agent.backend_ref = j.value("backend", "");
  agent.system_prompt = j.value("system_prompt", "");
  agent.context_window = j.value("context_window", kDefaultContextWindow);
  agent.write_trigger = j.value("write_trigger", kDefaultWriteTrigger);
  agent.round_budget = j.value("round_budget", kDefaultRoundBudget);
  agent.sampling.temperature = j.value("temperature", 0.0);
  if (j.contains("seed")) agent.sampling.seed = j.at("seed").get<uint64_t>();
  if (j.contains("max_tokens")) agent.sampling.max_tokens = j.at("max_tokens").get<int>();
  return agent;
}

json agent_config_to_json(const AgentConfig& agent) {
  json j;
  j["agent_id"] = agent.agent_id;
  j["backend"] = agent.backend_ref;
  if (!agent.system_prompt.empty()) j["system_prompt"] = agent.system_prompt;
  j["context_window"] = agent.context_window;
  j["write_trigger"] = agent.write_trigger;
  j["round_budget"] = agent.round_budget;
  j["temperature"] = agent.sampling.temperature;
  if (agent.sampling.seed) j["seed"] = *agent.sampling.seed;
  if (agent.sampling.max_tokens) j["max_tokens"] = *agent.sampling.max_tokens;
  return j;
}

std::vector<std::pair<std::string, std::string>> stubs_from_json(const json& j) {
  std::vector<std::pair<std::string, std::string>> stubs;
  for (const auto& entry : j) {
    stubs.emplace_back(entry.at("input").get<std::string>(), entry.at("output").get<std::string>());
  }
  return stubs;
}

json stubs_to_json(const std::vector<std::pair<std::string, std::string>>& stubs) {
  json arr = json::array();
  for (const auto& [input, output] : stubs) {
    arr.push_back({{"input", input}, {"output", output}});
  }
  return arr;
}

}  // namespace

RunConfig run_config_from_json(const json& j) {
  RunConfig config;
  config.mode = j.value("mode", "team");
  config.out_dir = j.value("out_dir", "run_out");

  const json& task = j.at("task");
  config.team.task.id = task.value("id", "");
  config.team.task.question = task.value("question", "");
  if (task.contains("gold_answer") && !task.at("gold_answer").is_null()) {
    config.team.task.gold_answer = task.at("gold_answer").get<std::string>();
  }
  config.team.task.tool_profile = tool_profile_from_string(task.value("tool_profile", "web"));

  if (j.contains("team")) {
    const json& team = j.at("team");
    config.team.hub_enabled = team.value("hub_enabled", true);
    if (team.contains("selector")) {
      auto rule = agg::AggregationRule::parse(team.at("selector").get<std::string>());
      if (!rule) throw std::runtime_error("team.selector: unknown rule");
      config.team.selector = *rule;
    }
    std::string scheduler = team.value("scheduler", "round_robin");
    config.team.scheduler =
        scheduler == "threads" ? SchedulerMode::threads : SchedulerMode::round_robin;
    if (team.contains("agents")) {
      for (const auto& a : team.at("agents")) {
        config.team.agents.push_back(agent_config_from_json(a));
      }
    }
  }

  if (j.contains("naive")) {
    config.naive_k = j.at("naive").value("k", 2);
  }
  if (j.contains("baseline")) {
    config.meta_backend = j.at("baseline").value("meta_backend", "");
    config.sub_backend = j.at("baseline").value("sub_backend", "");
    if (j.at("baseline").contains("k")) config.naive_k = j.at("baseline").at("k").get<int>();
  }

  if (j.contains("hub")) {
    config.hub_write_backend = j.at("hub").value("write_backend", "");
    config.hub_read_backend = j.at("hub").value("read_backend", "");
  }

  if (j.contains("backends")) {
    for (const auto& [name, b] : j.at("backends").items()) {
      BackendConfig backend;
      backend.type = b.value("type", "scripted");
      if (backend.type == "scripted" && b.contains("script")) {
        for (const auto& rule : b.at("script")) {
          backend.script.push_back(script_rule_from_json(rule));
        }
      } else if (backend.type == "http") {
        backend.endpoint.base_url = b.value("base_url", "");
        backend.endpoint.path = b.value("path", "/v1/chat/completions");
        backend.endpoint.model = b.value("model", "");
        backend.endpoint.api_key_env = b.value("api_key_env", "");
        if (!backend.endpoint.api_key_env.empty()) {
          const char* key = std::getenv(backend.endpoint.api_key_env.c_str());
          if (key) backend.endpoint.api_key = key;
        }
        backend.endpoint.max_retries = b.value("max_retries", 2);
        backend.endpoint.backoff_ms = b.value("backoff_ms", 200);
        backend.endpoint.timeout_sec = b.value("timeout_sec", 120);
      }
      config.backends.emplace(name, std::move(backend));
    }
  }

  config.corpus_path = j.value("corpus", "");
  if (j.contains("corpus_inline")) config.corpus_inline = j.at("corpus_inline");
  if (j.contains("python_stubs")) config.python_stubs = stubs_from_json(j.at("python_stubs"));
  if (j.contains("scholar_stubs")) config.scholar_stubs = stubs_from_json(j.at("scholar_stubs"));
  config.search_top_k = j.value("search_top_k", 10);
  return config;
}

json run_config_to_json(const RunConfig& config) {
  json j;
  j["mode"] = config.mode;
  j["out_dir"] = config.out_dir;

  json task;
  task["id"] = config.team.task.id;
  task["question"] = config.team.task.question;
  if (config.team.task.gold_answer) task["gold_answer"] = *config.team.task.gold_answer;
  task["tool_profile"] = to_string(config.team.task.tool_profile);
  j["task"] = std::move(task);

  json team;
  team["hub_enabled"] = config.team.hub_enabled;
  team["selector"] = config.team.selector.to_string();
  team["scheduler"] =
      config.team.scheduler == SchedulerMode::threads ? "threads" : "round_robin";
  json agents = json::array();
  for (const auto& agent : config.team.agents) agents.push_back(agent_config_to_json(agent));
  team["agents"] = std::move(agents);
  j["team"] = std::move(team);

  if (config.mode != "team") {
    j["baseline"] = {{"meta_backend", config.meta_backend},
                     {"sub_backend", config.sub_backend},
                     {"k", config.naive_k}};
  }
  if (!config.hub_write_backend.empty() || !config.hub_read_backend.empty()) {
    j["hub"] = {{"write_backend", config.hub_write_backend},
                {"read_backend", config.hub_read_backend}};
  }

  json backends;
  for (const auto& [name, backend] : config.backends) {
    json b;
    b["type"] = backend.type;
    if (backend.type == "scripted") {
      json script = json::array();
      for (const auto& rule : backend.script) script.push_back(script_rule_to_json(rule));
      b["script"] = std::move(script);
    } else {
      b["base_url"] = backend.endpoint.base_url;
      b["path"] = backend.endpoint.path;
      b["model"] = backend.endpoint.model;
      b["api_key_env"] = backend.endpoint.api_key_env;  // name only, never the secret
      b["max_retries"] = backend.endpoint.max_retries;
      b["backoff_ms"] = backend.endpoint.backoff_ms;
      b["timeout_sec"] = backend.endpoint.timeout_sec;
    }
    backends[name] = std::move(b);
  }
  j["backends"] = std::move(backends);

  if (!config.corpus_inline.is_null()) {
    j["corpus_inline"] = config.corpus_inline;
  } else if (!config.corpus_path.empty()) {
    j["corpus"] = config.corpus_path;
  }
  if (!config.python_stubs.empty()) j["python_stubs"] = stubs_to_json(config.python_stubs);
  if (!config.scholar_stubs.empty()) j["scholar_stubs"] = stubs_to_json(config.scholar_stubs);
  j["search_top_k"] = config.search_top_k;
  return j;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config file not found: " + path);
  json j = json::parse(in);
  return run_config_from_json(j);
}

std::vector<std::string> validate_run_config(const RunConfig& config) {
  std::vector<std::string> errors;
  if (config.mode != "team" && config.mode != "naive" && config.mode != "swarm") {
    errors.push_back("mode: must be one of team|naive|swarm");
  }

  auto require_backend = [&](const std::string& name, const std::string& field) {
    if (name.empty()) {
      errors.push_back(field + ": must name a backend");
    } else if (!config.backends.count(name)) {
      errors.push_back(field + ": backend '" + name + "' is not configured");
    }
  };

  if (config.mode == "team") {
    for (const auto& error : validate_team_config(config.team)) errors.push_back(error);
    for (size_t i = 0; i < config.team.agents.size(); ++i) {
      const std::string& ref = config.team.agents[i].backend_ref;
      if (!ref.empty() && !config.backends.count(ref)) {
        errors.push_back("team.agents[" + std::to_string(i) + "].backend: backend '" + ref +
                         "' is not configured");
      }
    }
    if (config.team.hub_enabled) {
      require_backend(config.hub_write_backend, "hub.write_backend");
      require_backend(config.hub_read_backend, "hub.read_backend");
    }
  } else {
    if (config.team.task.id.empty()) errors.push_back("task.id: must be nonempty");
    if (config.team.task.question.empty()) errors.push_back("task.question: must be nonempty");
    require_backend(config.meta_backend, "baseline.meta_backend");
    require_backend(config.sub_backend, "baseline.sub_backend");
    if (config.mode == "naive" && config.naive_k < 1) {
      errors.push_back("baseline.k: must be >= 1");
    }
  }
  return errors;
}

BackendRegistry::BackendRegistry(const std::map<std::string, BackendConfig>& configs) {
  for (const auto& [name, config] : configs) {
    if (config.type == "http") {
      backends_.emplace(name, std::make_unique<HttpBackend>(name, config.endpoint));
    } else {
      backends_.emplace(name, std::make_unique<ScriptedBackend>(name, config.script));
    }
  }
}

Backend* BackendRegistry::resolve(const std::string& name) const {
  auto it = backends_.find(name);
  if (it == backends_.end()) throw std::runtime_error("unknown backend: " + name);
  return it->second.get();
}

ScriptedBackend* BackendRegistry::scripted(const std::string& name) const {
  return dynamic_cast<ScriptedBackend*>(resolve(name));
}

std::vector<std::string> BackendRegistry::names() const {
  std::vector<std::string> names;
  for (const auto& [name, backend] : backends_) names.push_back(name);
  return names;
}

nlohmann::json aggregate_scores_for(const std::vector<CandidateAnswer>& candidates,
                                    const std::optional<std::string>& gold) {
  json scores = json::object();
  if (candidates.empty()) return scores;
  agg::Judge judge = agg::Judge::exact_match();
  if (gold) {
    scores["bon"] = judge(agg::bon(candidates).answer, *gold) ? 1.0 : 0.0;
    scores["mv"] = judge(agg::mv(candidates), *gold) ? 1.0 : 0.0;
    scores["wmv"] = judge(agg::wmv(candidates), *gold) ? 1.0 : 0.0;
    scores["fewtool"] = judge(agg::fewtool(candidates).answer, *gold) ? 1.0 : 0.0;
    scores["avg"] = agg::avg(candidates, *gold, judge);
    int n = static_cast<int>(candidates.size());
    for (int k = 1; k <= n; ++k) {
      scores["pass@" + std::to_string(k)] = agg::pass_at_k(candidates, *gold, judge, k);
    }
  }
  return scores;
}

RunOutcome execute_run(const RunConfig& config_in, const std::string& out_dir_override) {
  RunConfig config = config_in;
  if (!out_dir_override.empty()) config.out_dir = out_dir_override;

  std::vector<std::string> errors = validate_run_config(config);
  if (!errors.empty()) {
    std::string joined;
    for (const auto& e : errors) joined += (joined.empty() ? "" : "; ") + e;
    throw std::invalid_argument("invalid run config: " + joined);
  }

  // Materialize the corpus and inline it for the manifest snapshot.
  Corpus corpus;
  if (!config.corpus_inline.is_null() && config.corpus_inline.is_array()) {
    corpus = Corpus::from_json_array(config.corpus_inline);
  } else if (!config.corpus_path.empty()) {
    corpus = Corpus::from_jsonl_file(config.corpus_path);
  }
  config.corpus_inline = corpus.to_json_array();
  config.corpus_path.clear();

  ToolEnv tools(corpus, config.team.task.tool_profile, config.search_top_k);
  for (const auto& [input, output] : config.python_stubs) tools.python_stubs().add(input, output);
  for (const auto& [input, output] : config.scholar_stubs) tools.scholar_stubs().add(input, output);

  BackendRegistry registry(config.backends);
  EventLog log;
  Hub hub;

  double started_at =
      std::chrono::duration<double>(std::chrono::system_clock::now().time_since_epoch()).count();

  TeamResult result;
  if (config.mode == "team") {
    TeamEnv env;
    env.backends = [&](const std::string& name) { return registry.resolve(name); };
    if (config.team.hub_enabled) {
      env.write_model = registry.resolve(config.hub_write_backend);
      env.read_model = registry.resolve(config.hub_read_backend);
    }
    env.tools = &tools;
    env.log = &log;
    result = run_team(config.team, env, hub);
  } else {
    BaselineEnv env;
    env.meta_backend = registry.resolve(config.meta_backend);
    env.sub_backend = registry.resolve(config.sub_backend);
    env.tools = &tools;
    env.log = &log;
    result = config.mode == "naive" ? run_naive(config.team.task, config.naive_k, env)
                                    : run_swarm(config.team.task, env);
  }

  double finished_at =
      std::chrono::duration<double>(std::chrono::system_clock::now().time_since_epoch()).count();

  fs::create_directories(config.out_dir);
  log.write_jsonl((fs::path(config.out_dir) / "events.jsonl").string());
  hub.persist((fs::path(config.out_dir) / "hub").string());

  json manifest;
  manifest["code_version"] = kCodeVersion;
  manifest["config"] = run_config_to_json(config);
  manifest["backend_names"] = registry.names();
  json seeds = json::array();
  for (const auto& agent : config.team.agents) {
    if (agent.sampling.seed) seeds.push_back(*agent.sampling.seed);
  }
  manifest["seeds"] = std::move(seeds);
  manifest["started_at"] = started_at;
  manifest["finished_at"] = finished_at;
  manifest["task_id"] = config.team.task.id;
  if (config.team.task.gold_answer) manifest["gold_answer"] = *config.team.task.gold_answer;

  json agents = json::array();
  for (const auto& state : result.agents) {
    json a;
    a["agent_id"] = state.config.agent_id;
    a["status"] = to_string(state.status);
    a["rounds_used"] = state.rounds_used;
    a["tool_calls"] = state.tool_calls;
    if (state.final) {
      a["answer"] = state.final->answer;
      a["confidence"] = state.final->confidence;
    }
    if (!state.failure_reason.empty()) a["failure"] = state.failure_reason;
    agents.push_back(std::move(a));
  }
  manifest["agents"] = std::move(agents);
  if (result.selected) {
    manifest["selected_answer"] = result.selected->answer;
    manifest["selected_agent"] = result.selected->agent_id;
  }
  manifest["empty_team_outcome"] = result.empty_team_outcome;
  if (result.run_error) manifest["run_error"] = *result.run_error;
  manifest["aggregate_scores"] =
      aggregate_scores_for(result.candidates, config.team.task.gold_answer);

  std::ofstream manifest_out(fs::path(config.out_dir) / "manifest.json");
  manifest_out << manifest.dump(2) << "\n";

  RunOutcome outcome;
  outcome.result = std::move(result);
  outcome.events = log.events();
  outcome.manifest = std::move(manifest);
  outcome.run_dir = config.out_dir;
  return outcome;
}

ReplayOutcome replay_run(const std::string& run_dir) {
  std::ifstream manifest_in(fs::path(run_dir) / "manifest.json");
  if (!manifest_in) throw std::runtime_error("manifest.json not found in " + run_dir);
  json manifest = json::parse(manifest_in);
  RunConfig config = run_config_from_json(manifest.at("config"));

  for (const auto& [name, backend] : config.backends) {
    if (backend.type != "scripted") {
      throw std::runtime_error("replay requires scripted backends; '" + name + "' is " +
                               backend.type);
    }
  }

  std::vector<Event> original = EventLog::read_jsonl((fs::path(run_dir) / "events.jsonl").string());

  fs::path replay_dir = fs::path(run_dir) / "replay";
  RunOutcome replayed = execute_run(config, replay_dir.string());

  ReplayOutcome outcome;
  outcome.original_normalized = EventLog::normalized_jsonl(original);
  outcome.replayed_normalized = EventLog::normalized_jsonl(replayed.events);
  outcome.identical = outcome.original_normalized == outcome.replayed_normalized;
  return outcome;
}

}  // namespace agenthub

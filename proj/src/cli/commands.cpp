#include "agenthub/cli/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "agenthub/rlmath/rlmath.hpp"

namespace agenthub::cli {

namespace fs = std::filesystem;
using nlohmann::json;

int cmd_run(const std::string& config_path, const std::string& out_override,
            bool tolerate_failures, int64_t seed_override) {
  RunConfig config;
  try {
    config = load_run_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  if (seed_override >= 0) {
    for (auto& agent : config.team.agents) {
      agent.sampling.seed = static_cast<uint64_t>(seed_override);
    }
  }
  std::vector<std::string> errors = validate_run_config(config);
  if (!errors.empty()) {
    for (const auto& error : errors) std::cerr << "config error: " << error << "\n";
    return 2;
  }

  RunOutcome outcome;
  try {
    outcome = execute_run(config, out_override);
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return 1;
  }

  std::cout << "run dir: " << outcome.run_dir << "\n";
  for (const auto& state : outcome.result.agents) {
    std::cout << "  " << state.config.agent_id << ": " << to_string(state.status) << " ("
              << state.rounds_used << " rounds, " << state.tool_calls << " tool calls)";
    if (state.final) std::cout << " -> " << state.final->answer;
    std::cout << "\n";
  }
  if (outcome.result.selected) {
    std::cout << "selected: " << outcome.result.selected->answer << " (agent "
              << outcome.result.selected->agent_id << ")\n";
  } else {
    std::cout << "selected: (none; no agent answered)\n";
  }

  bool any_failed = false;
  for (const auto& state : outcome.result.agents) {
    if (state.status == AgentStatus::failed) any_failed = true;
  }
  if (any_failed && !tolerate_failures) return 1;
  return 0;
}

int cmd_replay(const std::string& run_dir) {
  ReplayOutcome outcome;
  try {
    outcome = replay_run(run_dir);
  } catch (const std::exception& e) {
    std::cerr << "replay failed: " << e.what() << "\n";
    return 2;
  }
  if (outcome.identical) {
    std::cout << "replay: identical (" << run_dir << ")\n";
    return 0;
  }
  std::cout << "replay: DIVERGED (" << run_dir << ")\n";
  return 1;
}

int cmd_baseline(const std::string& config_path, const std::string& mode_override,
                 const std::string& out_override, bool tolerate_failures) {
  RunConfig config;
  try {
    config = load_run_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  if (!mode_override.empty()) config.mode = mode_override;
  if (config.mode != "naive" && config.mode != "swarm") {
    std::cerr << "config error: mode: baseline requires naive|swarm, got '" << config.mode << "'\n";
    return 2;
  }

  // Re-serialize so cmd_run-equivalent validation and manifesting apply.
  std::vector<std::string> errors = validate_run_config(config);
  if (!errors.empty()) {
    for (const auto& error : errors) std::cerr << "config error: " << error << "\n";
    return 2;
  }
  try {
    RunOutcome outcome = execute_run(config, out_override);
    std::cout << "run dir: " << outcome.run_dir << "\n";
    if (outcome.result.selected) {
      std::cout << "selected: " << outcome.result.selected->answer << "\n";
    }
    bool any_failed = false;
    for (const auto& state : outcome.result.agents) {
      if (state.status == AgentStatus::failed) any_failed = true;
    }
    return (any_failed && !tolerate_failures) ? 1 : 0;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return 1;
  }
}

std::vector<CandidateAnswer> candidates_from_events(const std::vector<Event>& events) {
  std::vector<CandidateAnswer> candidates;
  for (const auto& event : events) {
    if (event.kind != "answer") continue;
    CandidateAnswer candidate;
    candidate.agent_id = event.agent_id;
    candidate.answer = event.payload.value("answer", "");
    candidate.confidence = event.payload.value("confidence", 0.5);
    candidate.tool_calls = event.payload.value("tool_calls", int64_t{0});
    candidates.push_back(std::move(candidate));
  }
  return candidates;
}

int cmd_aggregate(const std::string& log_path, const std::string& rule_text, int k) {
  std::vector<Event> events;
  try {
    events = EventLog::read_jsonl(log_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::vector<CandidateAnswer> candidates = candidates_from_events(events);
  if (candidates.empty()) {
    std::cerr << "error: the log contains no answer events\n";
    return 1;
  }

  auto rule = agg::AggregationRule::parse(rule_text);
  if (!rule) {
    std::cerr << "error: unknown rule '" << rule_text << "'\n";
    return 2;
  }
  if (k > 0) rule->k = k;

  std::optional<std::string> gold;
  fs::path manifest_path = fs::path(log_path).parent_path() / "manifest.json";
  if (fs::exists(manifest_path)) {
    std::ifstream in(manifest_path);
    json manifest = json::parse(in);
    if (manifest.contains("gold_answer")) gold = manifest.at("gold_answer").get<std::string>();
  }

  using Name = agg::AggregationRule::Name;
  switch (rule->name) {
    case Name::bon:
      std::cout << "bon: " << agg::bon(candidates).answer << "\n";
      break;
    case Name::mv:
      std::cout << "mv: " << agg::mv(candidates) << "\n";
      break;
    case Name::wmv:
      std::cout << "wmv: " << agg::wmv(candidates) << "\n";
      break;
    case Name::fewtool:
      std::cout << "fewtool: " << agg::fewtool(candidates).answer << "\n";
      break;
    case Name::avg:
    case Name::pass_at_k: {
      if (!gold) {
        std::cerr << "error: rule '" << rule_text << "' needs a gold answer in the manifest\n";
        return 1;
      }
      agg::Judge judge = agg::Judge::exact_match();
      if (rule->name == Name::avg) {
        std::cout << "avg: " << agg::avg(candidates, *gold, judge) << "\n";
      } else {
        std::cout << rule->to_string() << ": "
                  << agg::pass_at_k(candidates, *gold, judge, rule->k) << "\n";
      }
      break;
    }
  }

  std::cout << "scores: " << aggregate_scores_for(candidates, gold).dump() << "\n";
  return 0;
}

namespace {

struct RunRow {
  std::string task_id;
  std::string question;
  std::optional<std::string> gold;
  int64_t write_trigger = 0;
  json scores;
};

RunRow load_run_row(const std::string& run_dir) {
  std::ifstream in(fs::path(run_dir) / "manifest.json");
  if (!in) throw std::runtime_error("empty or invalid run dir (no manifest.json): " + run_dir);
  json manifest = json::parse(in);

  RunRow row;
  row.task_id = manifest.value("task_id", "");
  const json& config = manifest.at("config");
  row.question = config.at("task").value("question", "");
  if (manifest.contains("gold_answer")) row.gold = manifest.at("gold_answer").get<std::string>();
  if (config.contains("team") && config.at("team").contains("agents") &&
      !config.at("team").at("agents").empty()) {
    row.write_trigger =
        config.at("team").at("agents").at(0).value("write_trigger", kDefaultWriteTrigger);
  }
  row.scores = manifest.value("aggregate_scores", json::object());
  return row;
}

}  // namespace

json build_report(const std::vector<std::string>& run_dirs) {
  if (run_dirs.empty()) throw std::runtime_error("report: no run dirs given");

  std::vector<RunRow> rows;
  std::map<std::string, std::pair<std::string, std::optional<std::string>>> task_index;
  for (const auto& dir : run_dirs) {
    RunRow row = load_run_row(dir);
    auto it = task_index.find(row.task_id);
    if (it == task_index.end()) {
      task_index.emplace(row.task_id, std::make_pair(row.question, row.gold));
    } else if (it->second.first != row.question || it->second.second != row.gold) {
      throw std::runtime_error("mixed-task run set: task '" + row.task_id +
                               "' appears with different question/gold");
    }
    rows.push_back(std::move(row));
  }

  // Ablation sweep detection: more than one distinct write_trigger.
  std::map<int64_t, std::vector<const RunRow*>> by_trigger;
  for (const auto& row : rows) by_trigger[row.write_trigger].push_back(&row);

  auto mean_scores = [](const std::vector<const RunRow*>& group) {
    std::map<std::string, std::pair<double, size_t>> sums;
    for (const RunRow* row : group) {
      for (const auto& [rule, score] : row->scores.items()) {
        if (!score.is_number()) continue;
        auto& [total, count] = sums[rule];
        total += score.get<double>();
        count += 1;
      }
    }
    json out = json::object();
    for (const auto& [rule, pair] : sums) {
      out[rule] = pair.second ? pair.first / static_cast<double>(pair.second) : 0.0;
    }
    return out;
  };

  json report;
  report["runs"] = static_cast<int>(rows.size());
  if (by_trigger.size() > 1) {
    // Every trigger group must cover the same tasks, or rows are incomparable.
    std::optional<std::multiset<std::string>> reference;
    for (const auto& [trigger, group] : by_trigger) {
      std::multiset<std::string> tasks;
      for (const RunRow* row : group) tasks.insert(row->task_id);
      if (!reference) {
        reference = tasks;
      } else if (*reference != tasks) {
        throw std::runtime_error(
            "mixed-task run set: ablation sweep groups cover different task sets");
      }
    }
    json sweep = json::array();
    for (const auto& [trigger, group] : by_trigger) {
      json entry;
      entry["write_trigger"] = trigger;
      entry["runs"] = static_cast<int>(group.size());
      entry["scores"] = mean_scores(group);
      sweep.push_back(std::move(entry));
    }
    report["sweep"] = std::move(sweep);
  }
  std::vector<const RunRow*> all;
  for (const auto& row : rows) all.push_back(&row);
  report["scores"] = mean_scores(all);
  return report;
}

int cmd_report(const std::vector<std::string>& run_dirs, const std::string& json_out) {
  json report;
  try {
    report = build_report(run_dirs);
  } catch (const std::exception& e) {
    std::cerr << "report error: " << e.what() << "\n";
    return 1;
  }

  auto print_scores = [](const json& scores, const std::string& indent) {
    for (const auto& [rule, score] : scores.items()) {
      std::cout << indent << rule << ": " << score.get<double>() << "\n";
    }
  };

  std::cout << "runs: " << report["runs"].get<int>() << "\n";
  if (report.contains("sweep")) {
    std::cout << "write-trigger sweep:\n";
    for (const auto& entry : report["sweep"]) {
      std::cout << "  trigger " << entry["write_trigger"].get<int64_t>() << " ("
                << entry["runs"].get<int>() << " runs)\n";
      print_scores(entry["scores"], "    ");
    }
  }
  std::cout << "overall:\n";
  print_scores(report["scores"], "  ");

  if (!json_out.empty()) {
    std::ofstream out(json_out);
    out << report.dump(2) << "\n";
  }
  return 0;
}

SftCounts export_sft(const std::vector<std::string>& run_dirs, const std::string& out_dir) {
  fs::create_directories(out_dir);
  std::ofstream write_out(fs::path(out_dir) / "write_pairs.jsonl");
  std::ofstream read_out(fs::path(out_dir) / "read_pairs.jsonl");
  SftCounts counts;

  auto load_episode_steps = [](const fs::path& run_dir, const std::string& owner, int ordinal) {
    fs::path path = run_dir / "hub" / "episodes" / owner / (std::to_string(ordinal) + ".jsonl");
    json steps = json::array();
    std::ifstream in(path);
    std::string line;
    while (in && std::getline(in, line)) {
      if (!line.empty()) steps.push_back(json::parse(line));
    }
    return steps;
  };

  for (const auto& dir : run_dirs) {
    std::vector<Event> events = EventLog::read_jsonl((fs::path(dir) / "events.jsonl").string());
    for (const auto& event : events) {
      if (event.kind == "hub_write") {
        json pair;
        pair["owner"] = event.payload.value("owner", "");
        pair["ordinal"] = event.payload.value("ordinal", 0);
        pair["episode"] = load_episode_steps(dir, pair["owner"].get<std::string>(),
                                             pair["ordinal"].get<int>());
        pair["note"] = event.payload.value("note_summary", "");
        pair["degraded"] = event.payload.value("degraded", false);
        pair["terminal"] = event.payload.value("terminal", false);
        write_out << pair.dump() << "\n";
        counts.write_pairs += 1;
      } else if (event.kind == "hub_read") {
        json pair;
        pair["intent"] = event.payload.value("intent", "");
        json refs = json::array();
        for (const auto& ref : event.payload.value("refs", json::array())) {
          json r = ref;
          r["content"] = load_episode_steps(dir, ref.value("owner", ""), ref.value("ordinal", 0));
          refs.push_back(std::move(r));
        }
        pair["refs"] = std::move(refs);
        pair["prior"] = nullptr;  // readouts are synthesized without a prior in this runtime
        pair["readout"] = event.payload.value("readout", "");
        read_out << pair.dump() << "\n";
        counts.read_pairs += 1;
      }
    }
  }
  return counts;
}

int cmd_export_sft(const std::vector<std::string>& run_dirs, const std::string& out_dir) {
  try {
    SftCounts counts = export_sft(run_dirs, out_dir);
    std::cout << "write pairs: " << counts.write_pairs << "\n";
    std::cout << "read pairs: " << counts.read_pairs << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "export error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_rlmath_check() {
  bool all_passed = true;
  for (const auto& check : rlmath::run_property_checks()) {
    std::cout << (check.passed ? "[PASS] " : "[FAIL] ") << check.name << "\n";
    all_passed = all_passed && check.passed;
  }
  return all_passed ? 0 : 1;
}

namespace {

std::map<std::string, std::string> parse_kv(const std::string& arg) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(arg);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t eq = item.find('=');
    if (eq != std::string::npos) kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return kv;
}

}  // namespace

int cmd_simulate(const std::string& space_arg, const std::string& policy_arg, size_t seeds,
                 uint64_t seed_start, bool scaling, const std::string& out_path,
                 const std::string& csv_path) {
  auto space_kv = parse_kv(space_arg);
  auto policy_kv = parse_kv(policy_arg);

  int fact_count = space_kv.count("M") ? std::stoi(space_kv["M"]) : 50;
  int required = space_kv.count("S") ? std::stoi(space_kv["S"]) : fact_count;
  uint64_t space_seed = space_kv.count("seed") ? std::stoull(space_kv["seed"]) : 7;

  sim::SimPolicy policy;
  if (policy_kv.count("N")) policy.team_size = std::stoi(policy_kv["N"]);
  if (policy_kv.count("E")) policy.episode_length = std::stoi(policy_kv["E"]);
  if (policy_kv.count("read_prob")) policy.read_probability = std::stod(policy_kv["read_prob"]);
  if (policy_kv.count("hub")) policy.hub_enabled = policy_kv["hub"] != "off";
  if (policy_kv.count("cap")) policy.step_cap = std::stoi(policy_kv["cap"]);
  if (policy_kv.count("bias")) {
    policy.bias = policy_kv["bias"] == "sliced" ? sim::BiasKind::sliced : sim::BiasKind::uniform;
  }

  try {
    sim::KnowledgeSpace space = sim::make_space(fact_count, required, space_seed);
    std::vector<uint64_t> seed_list = sim::seed_range(seed_start, seeds);

    json output;
    if (scaling) {
      sim::ScalingReport report =
          sim::scaling_report(space, policy, {1, 2, 3, 5, 8}, seed_list);
      output = sim::report_to_json(report);
      std::cout << "N  Pass@N  search(hub)  search(iso)  traffic\n";
      for (const auto& row : report.rows) {
        std::cout << row.team_size << "  " << row.pass_at_n << "  " << row.mean_search_steps_hub
                  << "  " << row.mean_search_steps_isolated << "  " << row.mean_hub_traffic
                  << "\n";
      }
      std::cout << "pass monotone per seed: " << (report.pass_monotone_per_seed ? "yes" : "no")
                << "\n";
      std::cout << "traffic increasing: " << (report.traffic_increasing ? "yes" : "no") << "\n";
      std::cout << "paired p (hub < isolated at N=" << report.max_team_size
                << "): " << report.paired_p_value << "\n";
      if (!csv_path.empty()) {
        std::ofstream csv(csv_path);
        csv << "team_size,pass_at_n,mean_search_steps_hub,mean_search_steps_isolated,mean_hub_"
               "traffic\n";
        for (const auto& row : report.rows) {
          csv << row.team_size << "," << row.pass_at_n << "," << row.mean_search_steps_hub << ","
              << row.mean_search_steps_isolated << "," << row.mean_hub_traffic << "\n";
        }
      }
    } else {
      sim::SimMetrics metrics = sim::run_sim(space, policy, seed_list);
      output = sim::metrics_to_json(metrics);
      std::cout << "pass rate: " << metrics.pass_rate << "\n";
      std::cout << "mean search steps: " << metrics.mean_search_steps << "\n";
      std::cout << "mean hub traffic: " << metrics.mean_hub_traffic << "\n";
    }
    if (!out_path.empty()) {
      std::ofstream out(out_path);
      out << output.dump(2) << "\n";
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "simulate error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace agenthub::cli

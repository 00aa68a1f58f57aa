#include <string>
#include <vector>

#include <CLI11.hpp>

#include "agenthub/cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"agenthub: peer-agent collective-reasoning runtime"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand name

  std::string out_dir;
  bool tolerate_failures = false;
  int64_t seed_override = -1;
  app.add_option("--out", out_dir, "Output directory override");
  app.add_option("--seed", seed_override, "Override every agent's sampling seed");
  app.add_flag("--tolerate-failures", tolerate_failures, "Exit 0 even when an agent failed");

  std::string run_config;
  auto* run = app.add_subcommand("run", "Execute a team run from a config file");
  run->add_option("config", run_config, "Run config (JSON)")->required();

  std::string replay_dir;
  auto* replay = app.add_subcommand("replay", "Re-drive a scripted run from its manifest");
  replay->add_option("run_dir", replay_dir, "Run directory with manifest.json")->required();

  std::string baseline_config, baseline_mode;
  auto* baseline = app.add_subcommand("baseline", "Execute a naive|swarm baseline run");
  baseline->add_option("config", baseline_config, "Run config (JSON)")->required();
  baseline->add_option("--mode", baseline_mode, "naive|swarm (overrides config)");

  std::string agg_log, agg_rule = "bon";
  int agg_k = 0;
  auto* aggregate = app.add_subcommand("aggregate", "Aggregate candidates from an event log");
  aggregate->add_option("--log", agg_log, "events.jsonl path")->required();
  aggregate->add_option("--rule", agg_rule, "bon|mv|wmv|fewtool|avg|pass_at_k");
  aggregate->add_option("--k", agg_k, "k for pass_at_k");

  std::vector<std::string> report_dirs;
  std::string report_json;
  auto* report = app.add_subcommand("report", "Aggregate score table across run dirs");
  report->add_option("run_dirs", report_dirs, "Run directories")->required();
  report->add_option("--json", report_json, "Also write the report as JSON");

  std::vector<std::string> export_dirs;
  std::string export_out = "sft_export";
  auto* export_sft = app.add_subcommand("export-sft", "Export (episode, note) and read pairs");
  export_sft->add_option("run_dirs", export_dirs, "Run directories")->required();
  export_sft->add_option("--out-dir", export_out, "Export directory");

  std::string sim_space = "M=50,S=50", sim_policy = "N=2,E=5,read_prob=0.25,hub=on";
  size_t sim_seeds = 100;
  uint64_t sim_seed_start = 1;
  bool sim_scaling = false;
  std::string sim_out, sim_csv;
  auto* simulate = app.add_subcommand("simulate", "Run the knowledge-space simulator");
  simulate->add_option("--space", sim_space, "M=<facts>,S=<required>,seed=<seed>");
  simulate->add_option("--policy", sim_policy,
                       "N=,E=,read_prob=,hub=on|off,cap=,bias=uniform|sliced");
  simulate->add_option("--seeds", sim_seeds, "Number of seeds");
  simulate->add_option("--seed", sim_seed_start, "First seed");
  simulate->add_flag("--scaling", sim_scaling, "Scaling report over N in {1,2,3,5,8}");
  simulate->add_option("--report-out", sim_out, "Write the JSON report here");
  simulate->add_option("--csv", sim_csv, "Write the scaling table as CSV");

  auto* rlmath = app.add_subcommand("rlmath", "Optimization-arithmetic utilities");
  auto* rlmath_check = rlmath->add_subcommand("check", "Run the property suite");
  rlmath->require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  if (*run) {
    return agenthub::cli::cmd_run(run_config, out_dir, tolerate_failures, seed_override);
  }
  if (*replay) return agenthub::cli::cmd_replay(replay_dir);
  if (*baseline) {
    return agenthub::cli::cmd_baseline(baseline_config, baseline_mode, out_dir, tolerate_failures);
  }
  if (*aggregate) return agenthub::cli::cmd_aggregate(agg_log, agg_rule, agg_k);
  if (*report) return agenthub::cli::cmd_report(report_dirs, report_json);
  if (*export_sft) return agenthub::cli::cmd_export_sft(export_dirs, export_out);
  if (*simulate) {
    // `--out report.json` doubles as the report path for this subcommand.
    if (sim_out.empty()) sim_out = out_dir;
    return agenthub::cli::cmd_simulate(sim_space, sim_policy, sim_seeds, sim_seed_start,
                                       sim_scaling, sim_out, sim_csv);
  }
  if (*rlmath && *rlmath_check) return agenthub::cli::cmd_rlmath_check();
  return 0;
}

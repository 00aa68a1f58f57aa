#pragma once

#include <optional>
#include <string>
#include <vector>

#include "agenthub/runtime/config.hpp"
#include "agenthub/sim/sim.hpp"

namespace agenthub::cli {

int cmd_run(const std::string& config_path, const std::string& out_override,
            bool tolerate_failures, int64_t seed_override = -1);
int cmd_replay(const std::string& run_dir);
int cmd_baseline(const std::string& config_path, const std::string& mode_override,
                 const std::string& out_override, bool tolerate_failures);

std::vector<CandidateAnswer> candidates_from_events(const std::vector<Event>& events);
int cmd_aggregate(const std::string& log_path, const std::string& rule_text, int k);

// Per-rule score table over a run set; groups rows by write_trigger when the
// set is an ablation sweep. Throws on a mixed-task run set (inconsistent
// task/gold mapping or sweep groups covering different tasks).
nlohmann::json build_report(const std::vector<std::string>& run_dirs);
int cmd_report(const std::vector<std::string>& run_dirs, const std::string& json_out);

struct SftCounts {
  size_t write_pairs = 0;
  size_t read_pairs = 0;
};
SftCounts export_sft(const std::vector<std::string>& run_dirs, const std::string& out_dir);
int cmd_export_sft(const std::vector<std::string>& run_dirs, const std::string& out_dir);

int cmd_rlmath_check();

int cmd_simulate(const std::string& space_arg, const std::string& policy_arg, size_t seeds,
                 uint64_t seed_start, bool scaling, const std::string& out_path,
                 const std::string& csv_path);

}  // namespace agenthub::cli

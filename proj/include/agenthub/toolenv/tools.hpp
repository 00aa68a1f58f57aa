#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "agenthub/backends/backend.hpp"
#include "agenthub/core/types.hpp"
#include "agenthub/toolenv/corpus.hpp"

namespace agenthub {

// Outcome of one tool dispatch. Errors are observations too: the model sees
// its own mistake and the loop continues.
struct ToolOutcome {
  std::string observation;
  bool error = false;
};

std::string fnv1a64_hex(std::string_view input);

// Canned outputs for the python/scholar stubs, keyed by the fnv1a64 hash of
// the exact input text.
struct StubTable {
  std::map<std::string, std::string> by_hash;

  void add(const std::string& input, const std::string& output) {
    by_hash[fnv1a64_hex(input)] = output;
  }
  std::optional<std::string> lookup(const std::string& input) const {
    auto it = by_hash.find(fnv1a64_hex(input));
    if (it == by_hash.end()) return std::nullopt;
    return it->second;
  }
};

// Task tools behind the profile gate. Stateless per call; the corpus is
// immutable for the whole run.
class ToolEnv {
 public:
  ToolEnv(Corpus corpus, ToolProfile profile, int search_top_k = 10)
      : corpus_(std::move(corpus)), profile_(profile), search_top_k_(search_top_k) {}

  bool available(const std::string& tool) const;
  std::vector<std::string> available_tools() const;

  // Dispatches a task tool by name with JSON-text arguments. Unknown or
  // unavailable tools and malformed arguments come back as error outcomes.
  ToolOutcome dispatch(const std::string& tool, const std::string& arguments_json) const;

  ToolOutcome search(const std::vector<std::string>& queries) const;
  ToolOutcome visit(const std::string& url) const;
  ToolOutcome python_exec(const std::string& code) const;
  ToolOutcome scholar_search(const std::string& query) const;

  StubTable& python_stubs() { return python_stubs_; }
  StubTable& scholar_stubs() { return scholar_stubs_; }
  const Corpus& corpus() const { return corpus_; }
  ToolProfile profile() const { return profile_; }

 private:
  Corpus corpus_;
  ToolProfile profile_;
  int search_top_k_;
  StubTable python_stubs_;
  StubTable scholar_stubs_;
};

// Tool schemas as exposed to models. `include_memory` adds the hub memory
// tool; baselines pass extra = {create_subagent, assign_task} for the meta.
std::vector<ToolSchema> tool_schemas_for(ToolProfile profile, bool include_memory);
ToolSchema memory_tool_schema();
ToolSchema create_subagent_schema();
ToolSchema assign_task_schema();

}  // namespace agenthub

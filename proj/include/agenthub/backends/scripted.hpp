#pragma once

#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "agenthub/backends/backend.hpp"

namespace agenthub {

// One scripted rule: all set matchers must hold for the rule to fire.
// `capture` is a regex searched over the matched content; "$1".."$9" in the
// response content/arguments are replaced by its capture groups.
struct ScriptRule {
  std::optional<std::string> match_substring;
  std::optional<Role> match_role;      // restricts which messages are searched
  std::optional<int> match_ordinal;    // 1-based call index on this backend
  std::optional<std::string> capture;
  ChatResponse response;
};

// Deterministic test backend: first matching rule wins, every request is
// recorded, and an unmatched request is a script_exhausted error naming it.
class ScriptedBackend : public Backend {
 public:
  explicit ScriptedBackend(std::string name, std::vector<ScriptRule> rules)
      : name_(std::move(name)), rules_(std::move(rules)) {}

  BackendResult chat(const ChatRequest& request) override;
  std::string name() const override { return name_; }

  // Call trace for oracle assertions.
  std::vector<ChatRequest> trace() const;
  int calls() const;
  void reset();

 private:
  std::string name_;
  std::vector<ScriptRule> rules_;
  mutable std::mutex mu_;
  std::vector<ChatRequest> trace_;
  int calls_ = 0;
};

ScriptRule script_rule_from_json(const nlohmann::json& j);
nlohmann::json script_rule_to_json(const ScriptRule& rule);

}  // namespace agenthub

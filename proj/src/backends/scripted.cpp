#include "agenthub/backends/scripted.hpp"

#include <regex>

namespace agenthub {
namespace {

std::string joined_content(const ChatRequest& request, std::optional<Role> role) {
  std::string out;
  for (const auto& m : request.messages) {
    if (role && m.role != *role) continue;
    if (!out.empty()) out += "\n";
    out += m.content;
  }
  return out;
}

std::string substitute_groups(const std::string& text, const std::smatch& match) {
  std::string out;
  out.reserve(text.size());
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '$' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
      size_t group = static_cast<size_t>(text[i + 1] - '0');
      if (group < match.size()) {
        out += match[group].str();
        ++i;
        continue;
      }
    }
    out += text[i];
  }
  return out;
}

std::string request_digest(const ChatRequest& request, int ordinal) {
  std::string last;
  if (!request.messages.empty()) last = request.messages.back().content;
  if (last.size() > 160) last = last.substr(0, 160) + "...";
  return "call #" + std::to_string(ordinal) + ", last message: \"" + last + "\"";
}

}  // namespace

BackendResult ScriptedBackend::chat(const ChatRequest& request) {
  std::lock_guard<std::mutex> lock(mu_);
  ++calls_;
  trace_.push_back(request);

  for (const auto& rule : rules_) {
    if (rule.match_ordinal && *rule.match_ordinal != calls_) continue;
    std::string haystack = joined_content(request, rule.match_role);
    if (rule.match_substring && haystack.find(*rule.match_substring) == std::string::npos) {
      continue;
    }
    ChatResponse response = rule.response;
    if (rule.capture) {
      std::regex re(*rule.capture);
      std::smatch m;
      if (!std::regex_search(haystack, m, re)) continue;
      response.content = substitute_groups(response.content, m);
      if (response.tool_call) {
        response.tool_call->arguments = substitute_groups(response.tool_call->arguments, m);
      }
    }
    return BackendResult::success(std::move(response));
  }

  return BackendResult::failure(
      {BackendErrorKind::script_exhausted,
       "scripted backend '" + name_ + "' has no rule for " + request_digest(request, calls_)});
}

std::vector<ChatRequest> ScriptedBackend::trace() const {
  std::lock_guard<std::mutex> lock(mu_);
  return trace_;
}

int ScriptedBackend::calls() const {
  std::lock_guard<std::mutex> lock(mu_);
  return calls_;
}

void ScriptedBackend::reset() {
  std::lock_guard<std::mutex> lock(mu_);
  trace_.clear();
  calls_ = 0;
}

ScriptRule script_rule_from_json(const nlohmann::json& j) {
  ScriptRule rule;
  if (j.contains("match_substring")) rule.match_substring = j.at("match_substring").get<std::string>();
  if (j.contains("match_role")) rule.match_role = role_from_string(j.at("match_role").get<std::string>());
  if (j.contains("ordinal")) rule.match_ordinal = j.at("ordinal").get<int>();
  if (j.contains("capture")) rule.capture = j.at("capture").get<std::string>();
  const nlohmann::json& r = j.at("response");
  rule.response.content = r.value("content", "");
  if (r.contains("tool")) {
    ToolCall call;
    call.name = r.at("tool").value("name", "");
    if (r.at("tool").contains("arguments")) {
      const auto& args = r.at("tool").at("arguments");
      call.arguments = args.is_string() ? args.get<std::string>() : args.dump();
    }
    rule.response.tool_call = std::move(call);
  }
  return rule;
}

nlohmann::json script_rule_to_json(const ScriptRule& rule) {
  nlohmann::json j;
  if (rule.match_substring) j["match_substring"] = *rule.match_substring;
  if (rule.match_role) j["match_role"] = to_string(*rule.match_role);
  if (rule.match_ordinal) j["ordinal"] = *rule.match_ordinal;
  if (rule.capture) j["capture"] = *rule.capture;
  nlohmann::json r;
  r["content"] = rule.response.content;
  if (rule.response.tool_call) {
    r["tool"] = {{"name", rule.response.tool_call->name},
                 {"arguments", rule.response.tool_call->arguments}};
  }
  j["response"] = std::move(r);
  return j;
}

}  // namespace agenthub

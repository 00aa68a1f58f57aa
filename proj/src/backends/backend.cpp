#include "agenthub/backends/backend.hpp"

#include <stdexcept>

namespace agenthub {

using nlohmann::json;

std::string to_string(Role role) {
  switch (role) {
    case Role::system:
      return "system";
    case Role::user:
      return "user";
    case Role::assistant:
      return "assistant";
    case Role::tool:
      return "tool";
  }
  return "user";
}

Role role_from_string(const std::string& s) {
  if (s == "system") return Role::system;
  if (s == "assistant") return Role::assistant;
  if (s == "tool") return Role::tool;
  return Role::user;
}

std::string to_string(BackendErrorKind kind) {
  switch (kind) {
    case BackendErrorKind::transport:
      return "transport";
    case BackendErrorKind::http_status:
      return "http_status";
    case BackendErrorKind::malformed_body:
      return "malformed_body";
    case BackendErrorKind::script_exhausted:
      return "script_exhausted";
  }
  return "transport";
}

std::optional<ToolCall> extract_tool_call(const ChatResponse& response) {
  if (response.tool_call) return response.tool_call;

  // Fenced-text fallback: ```tool_call\n{"name": ..., "arguments": {...}}\n```
  static constexpr std::string_view kFence = "```tool_call";
  size_t start = response.content.find(kFence);
  if (start == std::string::npos) return std::nullopt;
  start += kFence.size();
  size_t end = response.content.find("```", start);
  if (end == std::string::npos) return std::nullopt;

  json body = json::parse(response.content.substr(start, end - start), nullptr,
                          /*allow_exceptions=*/false);
  if (!body.is_object() || !body.contains("name")) return std::nullopt;
  ToolCall call;
  call.name = body["name"].get<std::string>();
  if (body.contains("arguments")) {
    call.arguments = body["arguments"].is_string()
                         ? body["arguments"].get<std::string>()
                         : body["arguments"].dump();
  }
  return call;
}

json request_to_json(const ChatRequest& request) {
  json j;
  j["model"] = request.model;
  json messages = json::array();
  for (const auto& m : request.messages) {
    messages.push_back({{"role", to_string(m.role)}, {"content", m.content}});
  }
  j["messages"] = std::move(messages);
  if (!request.tool_schemas.empty()) {
    json tools = json::array();
    for (const auto& t : request.tool_schemas) {
      tools.push_back({{"type", "function"},
                       {"function",
                        {{"name", t.name},
                         {"description", t.description},
                         {"parameters", t.parameters}}}});
    }
    j["tools"] = std::move(tools);
  }
  j["temperature"] = request.sampling.temperature;
  if (request.sampling.seed) j["seed"] = *request.sampling.seed;
  if (request.sampling.max_tokens) j["max_tokens"] = *request.sampling.max_tokens;
  return j;
}

ChatRequest request_from_json(const json& j) {
  ChatRequest request;
  request.model = j.value("model", "");
  if (j.contains("messages")) {
    for (const auto& m : j.at("messages")) {
      ChatMessage msg;
      msg.role = role_from_string(m.value("role", "user"));
      msg.content = m.value("content", "");
      request.messages.push_back(std::move(msg));
    }
  }
  if (j.contains("tools")) {
    for (const auto& t : j.at("tools")) {
      const json& fn = t.contains("function") ? t.at("function") : t;
      ToolSchema schema;
      schema.name = fn.value("name", "");
      schema.description = fn.value("description", "");
      schema.parameters = fn.value("parameters", json::object());
      request.tool_schemas.push_back(std::move(schema));
    }
  }
  if (j.contains("temperature")) request.sampling.temperature = j.at("temperature").get<double>();
  if (j.contains("seed")) request.sampling.seed = j.at("seed").get<uint64_t>();
  if (j.contains("max_tokens")) request.sampling.max_tokens = j.at("max_tokens").get<int>();
  return request;
}

json response_to_json(const ChatResponse& response) {
  json message;
  message["content"] = response.content;
  if (response.tool_call) {
    message["tool_calls"] = json::array(
        {{{"type", "function"},
          {"function",
           {{"name", response.tool_call->name},
            {"arguments", response.tool_call->arguments}}}}});
  }
  json j;
  j["choices"] = json::array({{{"index", 0}, {"message", std::move(message)}}});
  if (response.usage) {
    j["usage"] = {{"prompt_tokens", response.usage->prompt_tokens},
                  {"completion_tokens", response.usage->completion_tokens}};
  }
  return j;
}

ChatResponse response_from_json(const json& j) {
  ChatResponse response;
  if (!j.contains("choices") || !j.at("choices").is_array() || j.at("choices").empty()) {
    throw std::runtime_error("response missing choices[0]");
  }
  const json& message = j.at("choices").at(0).at("message");
  if (message.contains("content") && !message.at("content").is_null()) {
    response.content = message.at("content").get<std::string>();
  }
  if (message.contains("tool_calls") && message.at("tool_calls").is_array() &&
      !message.at("tool_calls").empty()) {
    const json& fn = message.at("tool_calls").at(0).at("function");
    ToolCall call;
    call.name = fn.value("name", "");
    if (fn.contains("arguments")) {
      call.arguments = fn.at("arguments").is_string() ? fn.at("arguments").get<std::string>()
                                                      : fn.at("arguments").dump();
    }
    response.tool_call = std::move(call);
  }
  if (j.contains("usage") && j.at("usage").is_object()) {
    Usage usage;
    usage.prompt_tokens = j.at("usage").value("prompt_tokens", int64_t{0});
    usage.completion_tokens = j.at("usage").value("completion_tokens", int64_t{0});
    response.usage = usage;
  }
  return response;
}

}  // namespace agenthub

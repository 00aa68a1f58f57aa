#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace agenthub {

enum class Role { system, user, assistant, tool };

std::string to_string(Role role);
Role role_from_string(const std::string& s);

struct ChatMessage {
  Role role = Role::user;
  std::string content;
};

struct Sampling {
  double temperature = 0.0;
  std::optional<uint64_t> seed;
  std::optional<int> max_tokens;
};

struct ToolSchema {
  std::string name;
  std::string description;
  nlohmann::json parameters;  // JSON-schema object
};

struct ToolCall {
  std::string name;
  std::string arguments;  // JSON text
};

struct Usage {
  int64_t prompt_tokens = 0;
  int64_t completion_tokens = 0;
};

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  std::vector<ToolSchema> tool_schemas;
  Sampling sampling;
};

struct ChatResponse {
  std::string content;
  std::optional<ToolCall> tool_call;
  std::optional<Usage> usage;
};

enum class BackendErrorKind {
  transport,         // connection/timeout failures
  http_status,       // non-2xx response
  malformed_body,    // response did not parse as the expected schema
  script_exhausted,  // no scripted rule matched
};

std::string to_string(BackendErrorKind kind);

struct BackendError {
  BackendErrorKind kind = BackendErrorKind::transport;
  std::string message;
  int status = 0;  // HTTP status when kind == http_status
};

struct BackendResult {
  std::optional<ChatResponse> response;
  std::optional<BackendError> error;

  bool ok() const { return response.has_value(); }

  static BackendResult success(ChatResponse resp) {
    return BackendResult{std::move(resp), std::nullopt};
  }
  static BackendResult failure(BackendError err) {
    return BackendResult{std::nullopt, std::move(err)};
  }
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual BackendResult chat(const ChatRequest& request) = 0;
  virtual std::string name() const = 0;
};

// Dispatcher-side tool-call extraction: the native structured field wins;
// otherwise a fenced ```tool_call block with {"name", "arguments"} is parsed
// from the content. Heterogeneous backends differ in tool-call fidelity, so
// both forms are accepted.
std::optional<ToolCall> extract_tool_call(const ChatResponse& response);

// Wire-schema (de)serialization for the chat-completion JSON protocol.
// round-trips: parse(serialize(x)) == x on the supported subset.
nlohmann::json request_to_json(const ChatRequest& request);
ChatRequest request_from_json(const nlohmann::json& j);
nlohmann::json response_to_json(const ChatResponse& response);
ChatResponse response_from_json(const nlohmann::json& j);

}  // namespace agenthub

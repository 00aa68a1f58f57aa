#pragma once

#include <string>

#include "agenthub/backends/backend.hpp"

namespace agenthub {

struct EndpointConfig {
  std::string base_url;  // e.g. "http://localhost:8000"
  std::string path = "/v1/chat/completions";
  std::string model;
  std::string api_key;        // resolved from the env var, never logged
  std::string api_key_env;    // name recorded in manifests
  int max_retries = 2;        // retries after the first attempt
  int backoff_ms = 200;       // doubled per retry
  int timeout_sec = 120;
};

// Wire client for the de-facto chat-completion JSON protocol. Stateless and
// shareable across agents; retried errors are idempotent because requests
// carry no server-side state.
class HttpBackend : public Backend {
 public:
  HttpBackend(std::string name, EndpointConfig config)
      : name_(std::move(name)), config_(std::move(config)) {}

  BackendResult chat(const ChatRequest& request) override;
  std::string name() const override { return name_; }

  const EndpointConfig& config() const { return config_; }

 private:
  std::string name_;
  EndpointConfig config_;
};

}  // namespace agenthub

#include "agenthub/backends/http.hpp"

#include <chrono>
#include <thread>

#include <httplib.h>

namespace agenthub {

BackendResult HttpBackend::chat(const ChatRequest& request) {
  ChatRequest effective = request;
  if (effective.model.empty()) effective.model = config_.model;
  const std::string body = request_to_json(effective).dump();

  BackendError last_error{BackendErrorKind::transport, "no attempt made"};
  const int attempts = config_.max_retries + 1;

  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(config_.backoff_ms << (attempt - 1)));
    }

    httplib::Client client(config_.base_url);
    client.set_connection_timeout(config_.timeout_sec, 0);
    client.set_read_timeout(config_.timeout_sec, 0);
    httplib::Headers headers;
    if (!config_.api_key.empty()) {
      headers.emplace("Authorization", "Bearer " + config_.api_key);
    }

    auto result = client.Post(config_.path, headers, body, "application/json");
    if (!result) {
      last_error = {BackendErrorKind::transport,
                    "transport failure: " + httplib::to_string(result.error())};
      continue;
    }
    if (result->status < 200 || result->status >= 300) {
      last_error = {BackendErrorKind::http_status,
                    "HTTP " + std::to_string(result->status), result->status};
      // 4xx other than 429 will not change on retry.
      if (result->status >= 400 && result->status < 500 && result->status != 429) break;
      continue;
    }

    nlohmann::json parsed =
        nlohmann::json::parse(result->body, nullptr, /*allow_exceptions=*/false);
    if (parsed.is_discarded()) {
      return BackendResult::failure(
          {BackendErrorKind::malformed_body, "response body is not JSON"});
    }
    try {
      return BackendResult::success(response_from_json(parsed));
    } catch (const std::exception& e) {
      return BackendResult::failure(
          {BackendErrorKind::malformed_body, std::string("bad response schema: ") + e.what()});
    }
  }

  return BackendResult::failure(last_error);
}

}  // namespace agenthub

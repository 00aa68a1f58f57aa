#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <thread>

#include <httplib.h>

#include "agenthub/backends/http.hpp"
#include "agenthub/backends/scripted.hpp"

using namespace agenthub;

namespace {

ChatRequest simple_request(const std::string& content) {
  ChatRequest request;
  request.messages.push_back({Role::system, "sys"});
  request.messages.push_back({Role::user, content});
  return request;
}

}  // namespace

TEST_CASE("scripted backend: catch-all rule answers every call") {
  ScriptedBackend backend("s", {ScriptRule{.response = {"Exact Answer: 42\nConfidence: 90%"}}});
  for (int i = 0; i < 3; ++i) {
    auto result = backend.chat(simple_request("anything " + std::to_string(i)));
    REQUIRE(result.ok());
    CHECK(result.response->content == "Exact Answer: 42\nConfidence: 90%");
  }
  CHECK(backend.calls() == 3);
}

TEST_CASE("scripted backend: ordinal-matched three-turn trajectory") {
  std::vector<ScriptRule> rules;
  rules.push_back({.match_ordinal = 1,
                   .response = {"", ToolCall{"search", R"({"queries":["q1"]})"}, std::nullopt}});
  rules.push_back({.match_ordinal = 2,
                   .response = {"", ToolCall{"visit", R"({"url":"u"})"}, std::nullopt}});
  rules.push_back({.match_ordinal = 3, .response = {"Exact Answer: done\nConfidence: 80%"}});
  ScriptedBackend backend("s", rules);

  auto first = backend.chat(simple_request("turn1"));
  auto second = backend.chat(simple_request("turn2"));
  auto third = backend.chat(simple_request("turn3"));
  REQUIRE(first.ok());
  REQUIRE(second.ok());
  REQUIRE(third.ok());
  CHECK(first.response->tool_call->name == "search");
  CHECK(second.response->tool_call->name == "visit");
  CHECK(third.response->tool_call.has_value() == false);

  // Call-trace oracle: requests arrive in order and are fully recorded.
  auto trace = backend.trace();
  REQUIRE(trace.size() == 3);
  CHECK(trace[0].messages.back().content == "turn1");
  CHECK(trace[2].messages.back().content == "turn3");
}

TEST_CASE("scripted backend: substring and capture substitution") {
  std::vector<ScriptRule> rules;
  rules.push_back({.match_substring = "Research goal:",
                   .capture = R"(Research goal:\n([^\n]*))",
                   .response = {"EXTRACT($1)"}});
  ScriptedBackend backend("r", rules);

  auto result = backend.chat(simple_request("Research goal:\nfind founding year\n\nmore"));
  REQUIRE(result.ok());
  CHECK(result.response->content == "EXTRACT(find founding year)");
}

TEST_CASE("scripted backend: exhaustion identifies the request") {
  ScriptedBackend backend("s", {ScriptRule{.match_substring = "never-present", .response = {"x"}}});
  auto result = backend.chat(simple_request("some user turn"));
  REQUIRE_FALSE(result.ok());
  CHECK(result.error->kind == BackendErrorKind::script_exhausted);
  CHECK(result.error->message.find("some user turn") != std::string::npos);
  CHECK(result.error->message.find("'s'") != std::string::npos);
}

TEST_CASE("scripted backend is pure: same script and requests, same outputs") {
  std::vector<ScriptRule> rules;
  rules.push_back({.match_substring = "a", .response = {"ra"}});
  rules.push_back({.response = {"rb"}});

  auto run = [&]() {
    ScriptedBackend backend("s", rules);
    std::vector<std::string> outputs;
    for (const char* content : {"a one", "b two", "a three"}) {
      outputs.push_back(backend.chat(simple_request(content)).response->content);
    }
    return outputs;
  };
  CHECK(run() == run());
}

TEST_CASE("tool-call extraction: native field wins, fenced fallback parses") {
  ChatResponse native;
  native.tool_call = ToolCall{"search", "{}"};
  native.content = "irrelevant";
  CHECK(extract_tool_call(native)->name == "search");

  ChatResponse fenced;
  fenced.content =
      "I should look this up.\n```tool_call\n{\"name\": \"visit\", \"arguments\": {\"url\": "
      "\"https://x\"}}\n```";
  auto call = extract_tool_call(fenced);
  REQUIRE(call.has_value());
  CHECK(call->name == "visit");
  CHECK(nlohmann::json::parse(call->arguments).at("url") == "https://x");

  ChatResponse plain;
  plain.content = "no call here";
  CHECK_FALSE(extract_tool_call(plain).has_value());
}

TEST_CASE("wire schema round-trips") {
  ChatRequest request;
  request.model = "m";
  request.messages = {{Role::system, "s"}, {Role::user, "u"}, {Role::assistant, "a"}, {Role::tool, "t"}};
  ToolSchema schema;
  schema.name = "search";
  schema.description = "d";
  schema.parameters = {{"type", "object"}};
  request.tool_schemas.push_back(schema);
  request.sampling.temperature = 0.7;
  request.sampling.seed = 42;
  request.sampling.max_tokens = 256;

  ChatRequest parsed = request_from_json(request_to_json(request));
  CHECK(parsed.model == request.model);
  REQUIRE(parsed.messages.size() == 4);
  for (size_t i = 0; i < 4; ++i) {
    CHECK(parsed.messages[i].role == request.messages[i].role);
    CHECK(parsed.messages[i].content == request.messages[i].content);
  }
  REQUIRE(parsed.tool_schemas.size() == 1);
  CHECK(parsed.tool_schemas[0].name == "search");
  CHECK(parsed.sampling.temperature == request.sampling.temperature);
  CHECK(parsed.sampling.seed == request.sampling.seed);
  CHECK(parsed.sampling.max_tokens == request.sampling.max_tokens);

  ChatResponse response;
  response.content = "hello";
  response.tool_call = ToolCall{"visit", R"({"url":"u"})"};
  response.usage = Usage{10, 5};
  ChatResponse parsed_response = response_from_json(response_to_json(response));
  CHECK(parsed_response.content == response.content);
  CHECK(parsed_response.tool_call->name == "visit");
  CHECK(parsed_response.usage->prompt_tokens == 10);
  CHECK(parsed_response.usage->completion_tokens == 5);
}

TEST_CASE("http backend against a local stub server") {
  httplib::Server server;
  std::atomic<int> hits{0};
  server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    hits++;
    auto body = nlohmann::json::parse(req.body);
    CHECK(body.at("model") == "test-model");
    nlohmann::json reply = {
        {"choices",
         nlohmann::json::array(
             {{{"index", 0}, {"message", {{"content", "Exact Answer: ok\nConfidence: 70%"}}}}})},
        {"usage", {{"prompt_tokens", 7}, {"completion_tokens", 3}}}};
    res.set_content(reply.dump(), "application/json");
  });
  server.Post("/flaky", [&](const httplib::Request&, httplib::Response& res) {
    hits++;
    res.status = 500;
  });

  int port = server.bind_to_any_port("127.0.0.1");
  std::thread server_thread([&]() { server.listen_after_bind(); });
  server.wait_until_ready();

  SUBCASE("round-trip parse") {
    EndpointConfig config;
    config.base_url = "http://127.0.0.1:" + std::to_string(port);
    config.model = "test-model";
    HttpBackend backend("live", config);

    auto result = backend.chat(simple_request("hi"));
    REQUIRE(result.ok());
    CHECK(result.response->content == "Exact Answer: ok\nConfidence: 70%");
    REQUIRE(result.response->usage.has_value());
    CHECK(result.response->usage->prompt_tokens == 7);
  }

  SUBCASE("500 with retries=2 makes exactly 3 attempts then errors") {
    EndpointConfig config;
    config.base_url = "http://127.0.0.1:" + std::to_string(port);
    config.path = "/flaky";
    config.model = "test-model";
    config.max_retries = 2;
    config.backoff_ms = 1;
    HttpBackend backend("flaky", config);

    hits = 0;
    auto result = backend.chat(simple_request("hi"));
    REQUIRE_FALSE(result.ok());
    CHECK(result.error->kind == BackendErrorKind::http_status);
    CHECK(result.error->status == 500);
    CHECK(hits == 3);
  }

  server.stop();
  server_thread.join();
}

TEST_CASE("http backend surfaces malformed bodies distinctly") {
  httplib::Server server;
  server.Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
    res.set_content("not json at all", "text/plain");
  });
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread server_thread([&]() { server.listen_after_bind(); });
  server.wait_until_ready();

  EndpointConfig config;
  config.base_url = "http://127.0.0.1:" + std::to_string(port);
  config.model = "m";
  HttpBackend backend("bad", config);
  auto result = backend.chat(simple_request("hi"));
  REQUIRE_FALSE(result.ok());
  CHECK(result.error->kind == BackendErrorKind::malformed_body);

  server.stop();
  server_thread.join();
}

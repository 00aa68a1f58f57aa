#include "agenthub/toolenv/tools.hpp"

#include "agenthub/hub/prompts.hpp"

namespace agenthub {

using nlohmann::json;

std::string fnv1a64_hex(std::string_view input) {
  uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : input) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  char buf[17];
  snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return std::string(buf);
}

bool ToolEnv::available(const std::string& tool) const {
  if (tool == "search" || tool == "visit") return true;
  if (tool == "python" || tool == "scholar") {
    return profile_ == ToolProfile::web_python_scholar;
  }
  return false;
}

std::vector<std::string> ToolEnv::available_tools() const {
  std::vector<std::string> tools = {"search", "visit"};
  if (profile_ == ToolProfile::web_python_scholar) {
    tools.push_back("python");
    tools.push_back("scholar");
  }
  return tools;
}

ToolOutcome ToolEnv::dispatch(const std::string& tool, const std::string& arguments_json) const {
  if (!available(tool)) {
    if (tool == "python" || tool == "scholar") {
      return {"ERROR: tool '" + tool + "' is not available under this task's tool profile", true};
    }
    return {"ERROR: unknown tool '" + tool + "'", true};
  }

  json args = json::parse(arguments_json.empty() ? "{}" : arguments_json, nullptr,
                          /*allow_exceptions=*/false);
  if (args.is_discarded() || !args.is_object()) {
    return {"ERROR: tool arguments are not a JSON object", true};
  }

  if (tool == "search") {
    std::vector<std::string> queries;
    if (args.contains("queries") && args.at("queries").is_array()) {
      for (const auto& q : args.at("queries")) {
        if (q.is_string()) queries.push_back(q.get<std::string>());
      }
    } else if (args.contains("query") && args.at("query").is_string()) {
      queries.push_back(args.at("query").get<std::string>());
    }
    return search(queries);
  }
  if (tool == "visit") {
    if (!args.contains("url") || !args.at("url").is_string()) {
      return {"ERROR: visit requires a string 'url' argument", true};
    }
    return visit(args.at("url").get<std::string>());
  }
  if (tool == "python") {
    if (!args.contains("code") || !args.at("code").is_string()) {
      return {"ERROR: python requires a string 'code' argument", true};
    }
    return python_exec(args.at("code").get<std::string>());
  }
  // scholar
  if (!args.contains("query") || !args.at("query").is_string()) {
    return {"ERROR: scholar requires a string 'query' argument", true};
  }
  return scholar_search(args.at("query").get<std::string>());
}

ToolOutcome ToolEnv::search(const std::vector<std::string>& queries) const {
  bool any_nonempty = false;
  for (const auto& q : queries) {
    if (!q.empty()) any_nonempty = true;
  }
  if (queries.empty() || !any_nonempty) {
    return {"ERROR: search requires at least one nonempty query", true};
  }

  std::string out;
  auto batches = corpus_.search_batch(queries, search_top_k_);
  for (size_t i = 0; i < queries.size(); ++i) {
    out += "Results for \"" + queries[i] + "\":\n";
    if (batches[i].empty()) {
      out += "  (no results)\n";
    }
    for (size_t r = 0; r < batches[i].size(); ++r) {
      const auto& hit = batches[i][r];
      out += "  " + std::to_string(r + 1) + ". " + hit.title + " [" + hit.url + "]\n";
      out += "     " + hit.snippet + "\n";
    }
  }
  return {out, false};
}

ToolOutcome ToolEnv::visit(const std::string& url) const {
  auto body = corpus_.visit(url);
  if (!body) {
    return {"ERROR: page not found: " + url, true};
  }
  return {*body, false};
}

ToolOutcome ToolEnv::python_exec(const std::string& code) const {
  auto canned = python_stubs_.lookup(code);
  if (!canned) {
    return {"ERROR: python stub has no canned output for this code (hash " + fnv1a64_hex(code) + ")",
            true};
  }
  return {*canned, false};
}

ToolOutcome ToolEnv::scholar_search(const std::string& query) const {
  auto canned = scholar_stubs_.lookup(query);
  if (!canned) {
    return {"ERROR: scholar stub has no canned output for this query (hash " + fnv1a64_hex(query) +
            ")",
            true};
  }
  return {*canned, false};
}

ToolSchema memory_tool_schema() {
  ToolSchema schema;
  schema.name = "memory";
  schema.description = std::string(prompts::kMemoryToolDescription);
  schema.parameters = {
      {"type", "object"},
      {"properties",
       {{"pages",
         {{"type", "array"},
          {"items", {{"type", "integer"}}},
          {"description", std::string(prompts::kMemoryToolPagesParam)}}},
        {"goal",
         {{"type", "string"}, {"description", std::string(prompts::kMemoryToolGoalParam)}}}}},
      {"required", json::array({"pages", "goal"})}};
  return schema;
}

ToolSchema create_subagent_schema() {
  ToolSchema schema;
  schema.name = "create_subagent";
  schema.description =
      "Instantiate a specialized subagent with a custom system prompt and a stable identifier so "
      "that it can be reused across multiple tasks.";
  schema.parameters = {{"type", "object"},
                       {"properties",
                        {{"identifier", {{"type", "string"}}},
                         {"system_prompt", {{"type", "string"}}}}},
                       {"required", json::array({"identifier", "system_prompt"})}};
  return schema;
}

ToolSchema assign_task_schema() {
  ToolSchema schema;
  schema.name = "assign_task";
  schema.description =
      "Dispatch a concrete task to a previously created subagent and return its task report.";
  schema.parameters = {{"type", "object"},
                       {"properties",
                        {{"identifier", {{"type", "string"}}},
                         {"task_description", {{"type", "string"}}}}},
                       {"required", json::array({"identifier", "task_description"})}};
  return schema;
}

std::vector<ToolSchema> tool_schemas_for(ToolProfile profile, bool include_memory) {
  std::vector<ToolSchema> schemas;

  ToolSchema search;
  search.name = "search";
  search.description =
      "Web search over the configured source. Accepts a batch of queries and returns ranked "
      "results (url, title, snippet) per query.";
  search.parameters = {{"type", "object"},
                       {"properties",
                        {{"queries", {{"type", "array"}, {"items", {{"type", "string"}}}}}}},
                       {"required", json::array({"queries"})}};
  schemas.push_back(std::move(search));

  ToolSchema visit;
  visit.name = "visit";
  visit.description = "Fetch a page by url and return its text content.";
  visit.parameters = {{"type", "object"},
                      {"properties", {{"url", {{"type", "string"}}}}},
                      {"required", json::array({"url"})}};
  schemas.push_back(std::move(visit));

  if (profile == ToolProfile::web_python_scholar) {
    ToolSchema python;
    python.name = "python";
    python.description = "Execute a Python snippet and return its output.";
    python.parameters = {{"type", "object"},
                         {"properties", {{"code", {{"type", "string"}}}}},
                         {"required", json::array({"code"})}};
    schemas.push_back(std::move(python));

    ToolSchema scholar;
    scholar.name = "scholar";
    scholar.description = "Search scholarly literature and return a citation list.";
    scholar.parameters = {{"type", "object"},
                          {"properties", {{"query", {{"type", "string"}}}}},
                          {"required", json::array({"query"})}};
    schemas.push_back(std::move(scholar));
  }

  if (include_memory) schemas.push_back(memory_tool_schema());
  return schemas;
}

}  // namespace agenthub

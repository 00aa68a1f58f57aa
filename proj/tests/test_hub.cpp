#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <thread>

#include "agenthub/backends/scripted.hpp"
#include "agenthub/hub/hub.hpp"
#include "agenthub/hub/prompts.hpp"

using namespace agenthub;

namespace {

Episode make_episode(const std::string& owner, int ordinal, int steps, const std::string& tag = "") {
  Episode episode;
  episode.owner = owner;
  episode.ordinal = ordinal;
  for (int i = 0; i < steps; ++i) {
    TrajectoryStep step;
    step.index = i;
    step.action.reasoning = "reasoning " + tag + " step " + std::to_string(i);
    step.action.tool_name = "search";
    step.action.tool_arguments = R"({"queries":["probe )" + tag + R"("]})";
    step.observation = "observation " + tag + " " + std::to_string(i);
    step.token_cost = step_token_cost(step.action, step.observation, default_token_counter());
    episode.steps.push_back(step);
  }
  episode.token_total = episode_token_total(episode);
  return episode;
}

ScriptedBackend echo_write_model() {
  // Note distinguishable per episode: echoes the first step line it sees.
  return ScriptedBackend(
      "write", {ScriptRule{.capture = R"(reasoning (\S+) step)", .response = {"SUMMARY($1)"}}});
}

}  // namespace

TEST_CASE("write_episode stores raw content and the scripted note") {
  Hub hub;
  ScriptedBackend write_model(
      "write", {ScriptRule{.response = {"SUMMARY(owner=A,page=1)"}}});
  auto [ref, note] = hub.write_episode(make_episode("A", 1, 3), write_model);

  CHECK(ref.owner == "A");
  CHECK(ref.ordinal == 1);
  CHECK(note.summary == "SUMMARY(owner=A,page=1)");
  CHECK_FALSE(note.degraded);
  CHECK(hub.episode_count() == 1);
  CHECK(hub.note_count() == 1);

  // The write model received the memory-manager prompt and the raw window.
  auto trace = write_model.trace();
  REQUIRE(trace.size() == 1);
  CHECK(trace[0].messages[0].content == std::string(prompts::kMemoryManagerSystem));
  CHECK(trace[0].messages[1].content.find("Previous conversation and tool-use history:") !=
        std::string::npos);
  CHECK(trace[0].messages[1].content.find("observation  0") != std::string::npos);
}

TEST_CASE("two successive writes get ordinals 1 then 2") {
  Hub hub;
  ScriptedBackend write_model = echo_write_model();
  auto first = hub.write_episode(make_episode("A", 1, 2, "one"), write_model);
  auto second = hub.write_episode(make_episode("A", 2, 2, "two"), write_model);
  CHECK(first.ref.ordinal == 1);
  CHECK(second.ref.ordinal == 2);
  CHECK(hub.write_log_size() == 2);
  CHECK(second.note.created_at > first.note.created_at);
}

TEST_CASE("duplicate or gapped ordinals are protocol violations") {
  Hub hub;
  ScriptedBackend write_model = echo_write_model();
  hub.write_episode(make_episode("A", 1, 1), write_model);
  CHECK_THROWS_AS(hub.write_episode(make_episode("A", 1, 1), write_model), HubError);
  CHECK_THROWS_AS(hub.write_episode(make_episode("A", 3, 1), write_model), HubError);
  CHECK_THROWS_AS(hub.write_episode(make_episode("B", 0, 1), write_model), HubError);
  CHECK_THROWS_AS(hub.write_episode(Episode{"C", 1, {}, 0}, write_model), HubError);
}

TEST_CASE("write-model failure degrades the note but keeps the raw episode") {
  Hub hub;
  ScriptedBackend broken("write", {});  // exhausts on every call
  Episode episode = make_episode("A", 1, 4, "broken");
  auto [ref, note] = hub.write_episode(episode, broken);

  CHECK(note.degraded);
  CHECK(note.summary.find("reasoning broken step 0") != std::string::npos);
  CHECK(default_count_tokens(note.summary) <= Hub::kDegradedSummaryTokens);
  REQUIRE(hub.episode(ref).has_value());
  CHECK(hub.episode(ref)->steps.size() == 4);
}

TEST_CASE("note shape: candidate list plus open-questions block") {
  // A failure-map style page: the scripted write model emits a note with a
  // candidates section and an open-questions section when the window shows
  // several rejected leads.
  Hub hub;
  ScriptedBackend write_model(
      "write",
      {ScriptRule{.match_substring = "rejected",
                  .response = {"Candidates examined: one (too late); two (no fit).\nOpen "
                               "questions: the target itself remains unidentified."}}});
  Episode episode = make_episode("agent-1", 1, 2);
  episode.steps[0].action.reasoning = "candidate one rejected: too late";
  episode.steps[1].action.reasoning = "candidate two rejected: no fit";
  auto [ref, note] = hub.write_episode(episode, write_model);
  CHECK(note.summary.find("Candidates examined") != std::string::npos);
  CHECK(note.summary.find("Open questions") != std::string::npos);
}

TEST_CASE("evict_and_replace swaps the active segment for the note") {
  WorkingContext ctx;
  ctx.system_preamble = "sys";
  Episode episode = make_episode("A", 1, 3);
  ctx.active = episode.steps;
  EpisodeNote note{{"A", 1}, "a 500-token-ish summary", 1};

  int64_t before = context_tokens(ctx, default_token_counter());
  WorkingContext after = evict_and_replace(ctx, episode.ref(), note);
  int64_t after_tokens = context_tokens(after, default_token_counter());

  CHECK(after.active.empty());
  REQUIRE(after.own_notes.size() == 1);
  CHECK(after.own_notes[0].summary == note.summary);
  CHECK(after.system_preamble == "sys");
  // Exact arithmetic: the drop is the episode total minus the note size.
  CHECK(before - after_tokens ==
        episode.token_total - default_count_tokens(note.summary));

  CHECK_THROWS_AS(evict_and_replace(after, episode.ref(), note), HubError);  // empty active
  EpisodeNote wrong_note{{"B", 9}, "x", 2};
  CHECK_THROWS_AS(evict_and_replace(ctx, episode.ref(), wrong_note), HubError);
}

TEST_CASE("eviction arithmetic at the configured budget scale") {
  // 64,000-token active segment replaced by a 500-token note.
  WorkingContext ctx;
  TrajectoryStep big;
  big.index = 0;
  big.action.reasoning = "r";
  big.observation = std::string(4 * 63999, 'o');
  big.token_cost = step_token_cost(big.action, big.observation, default_token_counter());
  ctx.active.push_back(big);
  Episode episode;
  episode.owner = "A";
  episode.ordinal = 1;
  episode.steps = ctx.active;
  episode.token_total = episode_token_total(episode);
  REQUIRE(episode.token_total == 64000);

  EpisodeNote note{{"A", 1}, std::string(2000, 'n'), 1};  // 500 tokens
  WorkingContext after = evict_and_replace(ctx, episode.ref(), note);
  CHECK(context_tokens(ctx, default_token_counter()) -
            context_tokens(after, default_token_counter()) ==
        63500);
}

TEST_CASE("read folds pages in (owner, ordinal) order and threads the summary") {
  Hub hub;
  ScriptedBackend write_model = echo_write_model();
  hub.write_episode(make_episode("B", 1, 2, "b1"), write_model);
  hub.write_episode(make_episode("B", 2, 2, "b2"), write_model);

  std::vector<ScriptRule> read_rules;
  read_rules.push_back({.match_ordinal = 1, .response = {"R1"}});
  read_rules.push_back({.match_ordinal = 2, .response = {"R2"}});
  ScriptedBackend read_model("read", read_rules);

  ReadRequest request;
  request.requester = "A";
  request.intent = "find founding year";
  request.refs = {{"B", 2}, {"B", 1}};  // deliberately out of order

  std::string readout = hub.read(request, read_model);
  CHECK(readout == "R2");

  auto trace = read_model.trace();
  REQUIRE(trace.size() == 2);  // one call per referenced page
  CHECK(trace[0].messages[0].content == std::string(prompts::kConsultSystem));
  // First call: page (B,1), empty previous summary.
  CHECK(trace[0].messages[1].content.find("Research goal:\nfind founding year") !=
        std::string::npos);
  CHECK(trace[0].messages[1].content.find("reasoning b1 step 0") != std::string::npos);
  // Second call: page (B,2), previous summary = first call's output.
  CHECK(trace[1].messages[1].content.find("Previous extracted results:\nR1") != std::string::npos);
  CHECK(trace[1].messages[1].content.find("reasoning b2 step 0") != std::string::npos);
}

TEST_CASE("read receives raw episode steps, never the note") {
  Hub hub;
  ScriptedBackend write_model("write", {ScriptRule{.response = {"THE-NOTE-TEXT"}}});
  hub.write_episode(make_episode("B", 1, 3, "raw"), write_model);

  ScriptedBackend read_model("read", {ScriptRule{.response = {"synthesis"}}});
  ReadRequest request{"A", "goal", {{"B", 1}}, std::nullopt};
  hub.read(request, read_model);

  auto trace = read_model.trace();
  REQUIRE(trace.size() == 1);
  const std::string& user = trace[0].messages[1].content;
  CHECK(user.find("reasoning raw step 0") != std::string::npos);
  CHECK(user.find("observation raw 2") != std::string::npos);
  CHECK(user.find("THE-NOTE-TEXT") == std::string::npos);
}

TEST_CASE("read rejects empty, oversized, and unknown refs") {
  Hub hub;
  ScriptedBackend write_model = echo_write_model();
  for (int i = 1; i <= 6; ++i) hub.write_episode(make_episode("B", i, 1), write_model);
  ScriptedBackend read_model("read", {ScriptRule{.response = {"r"}}});

  ReadRequest empty{"A", "goal", {}, std::nullopt};
  CHECK_THROWS_AS(hub.read(empty, read_model), HubError);

  ReadRequest oversized{"A", "goal", {{"B", 1}, {"B", 2}, {"B", 3}, {"B", 4}, {"B", 5}, {"B", 6}},
                        std::nullopt};
  CHECK_THROWS_AS(hub.read(oversized, read_model), HubError);
  CHECK(read_model.calls() == 0);  // rejected before any model call

  ReadRequest unknown{"A", "goal", {{"Z", 7}}, std::nullopt};
  try {
    hub.read(unknown, read_model);
    FAIL("expected HubError");
  } catch (const HubError& e) {
    CHECK(std::string(e.what()).find("(Z, 7)") != std::string::npos);
  }
}

TEST_CASE("visible_notes excludes the requester and follows write order") {
  Hub hub;
  ScriptedBackend write_model = echo_write_model();
  CHECK(hub.visible_notes("A").empty());

  hub.write_episode(make_episode("A", 1, 1, "a1"), write_model);
  hub.write_episode(make_episode("B", 1, 1, "b1"), write_model);
  hub.write_episode(make_episode("A", 2, 1, "a2"), write_model);

  auto for_a = hub.visible_notes("A");
  REQUIRE(for_a.size() == 1);
  CHECK(for_a[0].episode_ref.owner == "B");

  // Replay oracle: requester C sees all three notes in write_log order.
  auto for_c = hub.visible_notes("C");
  REQUIRE(for_c.size() == 3);
  auto log = hub.write_log();
  for (size_t i = 0; i < 3; ++i) {
    CHECK(for_c[i].episode_ref == log[i].second);
    CHECK(for_c[i].created_at == log[i].first);
  }
}

TEST_CASE("append-only under concurrent writers") {
  Hub hub;
  ScriptedBackend write_model = echo_write_model();
  constexpr int kWriters = 8;
  constexpr int kWritesEach = 25;

  std::vector<std::thread> writers;
  for (int w = 0; w < kWriters; ++w) {
    writers.emplace_back([&, w]() {
      std::string owner = "agent-" + std::to_string(w);
      for (int i = 1; i <= kWritesEach; ++i) {
        hub.write_episode(make_episode(owner, i, 1, owner), write_model);
      }
    });
  }
  for (auto& writer : writers) writer.join();

  CHECK(hub.episode_count() == kWriters * kWritesEach);
  CHECK(hub.note_count() == kWriters * kWritesEach);
  CHECK(hub.write_log_size() == kWriters * kWritesEach);

  // Every (owner, ordinal) unique; per-owner ordinals gapless 1..k.
  std::set<std::pair<std::string, int>> seen;
  std::map<std::string, std::set<int>> per_owner;
  for (const auto& [ts, ref] : hub.write_log()) {
    CHECK(seen.insert({ref.owner, ref.ordinal}).second);
    per_owner[ref.owner].insert(ref.ordinal);
  }
  for (const auto& [owner, ordinals] : per_owner) {
    REQUIRE(ordinals.size() == kWritesEach);
    CHECK(*ordinals.begin() == 1);
    CHECK(*ordinals.rbegin() == kWritesEach);
  }
}

TEST_CASE("persistence layout: per-owner episode files and ordered notes") {
  namespace fs = std::filesystem;
  Hub hub;
  ScriptedBackend write_model = echo_write_model();
  hub.write_episode(make_episode("A", 1, 2, "a1"), write_model);
  hub.write_episode(make_episode("B", 1, 3, "b1"), write_model);

  fs::path dir = fs::temp_directory_path() / "agenthub_hub_persist_test";
  fs::remove_all(dir);
  hub.persist(dir.string());

  CHECK(fs::exists(dir / "episodes" / "A" / "1.jsonl"));
  CHECK(fs::exists(dir / "episodes" / "B" / "1.jsonl"));

  std::ifstream episode_in(dir / "episodes" / "B" / "1.jsonl");
  std::string line;
  int lines = 0;
  while (std::getline(episode_in, line)) {
    if (line.empty()) continue;
    TrajectoryStep step = step_from_json(nlohmann::json::parse(line));
    CHECK(step.index == lines);
    ++lines;
  }
  CHECK(lines == 3);  // one step per line

  std::ifstream notes_in(dir / "notes.jsonl");
  std::vector<EpisodeNote> notes;
  while (std::getline(notes_in, line)) {
    if (!line.empty()) notes.push_back(note_from_json(nlohmann::json::parse(line)));
  }
  REQUIRE(notes.size() == 2);
  CHECK(notes[0].episode_ref.owner == "A");
  CHECK(notes[1].episode_ref.owner == "B");
  fs::remove_all(dir);
}

TEST_CASE("page_index covers own and teammate pages in write order") {
  Hub hub;
  ScriptedBackend write_model = echo_write_model();
  hub.write_episode(make_episode("A", 1, 1, "a1"), write_model);
  hub.write_episode(make_episode("B", 1, 1, "b1"), write_model);
  hub.write_episode(make_episode("A", 2, 1, "a2"), write_model);

  auto index = hub.page_index("A");
  REQUIRE(index.size() == 3);
  CHECK(index[0].episode_ref == EpisodeRef{"A", 1});
  CHECK(index[1].episode_ref == EpisodeRef{"B", 1});
  CHECK(index[2].episode_ref == EpisodeRef{"A", 2});
}

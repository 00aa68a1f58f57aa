#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

namespace agenthub {

struct CorpusDocument {
  std::string url;
  std::string title;
  std::string body;
};

struct SearchHit {
  std::string url;
  std::string title;
  std::string snippet;
};

// Immutable offline document set backing the mock web tools. Search ranks by
// distinct-term overlap (title + body) with ties broken lexicographically by
// url; snippets are the best 200-character term window.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<CorpusDocument> documents);

  static Corpus from_jsonl_file(const std::string& path);
  static Corpus from_json_array(const nlohmann::json& docs);
  nlohmann::json to_json_array() const;

  std::vector<SearchHit> search(const std::string& query, int top_k = 10) const;
  std::vector<std::vector<SearchHit>> search_batch(const std::vector<std::string>& queries,
                                                   int top_k = 10) const;
  std::optional<std::string> visit(const std::string& url) const;

  size_t size() const { return documents_.size(); }

  static std::vector<std::string> normalized_terms(const std::string& text);

 private:
  std::vector<CorpusDocument> documents_;                 // sorted by url
  std::map<std::string, std::set<std::string>> index_;    // term -> urls

  static constexpr size_t kSnippetChars = 200;
  std::string make_snippet(const CorpusDocument& doc,
                           const std::vector<std::string>& query_terms) const;
};

}  // namespace agenthub

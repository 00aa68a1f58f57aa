#include "agenthub/toolenv/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>

namespace agenthub {

std::vector<std::string> Corpus::normalized_terms(const std::string& text) {
  std::vector<std::string> terms;
  std::string current;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      current += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!current.empty()) {
      terms.push_back(current);
      current.clear();
    }
  }
  if (!current.empty()) terms.push_back(current);
  return terms;
}

Corpus::Corpus(std::vector<CorpusDocument> documents) : documents_(std::move(documents)) {
  std::sort(documents_.begin(), documents_.end(),
            [](const CorpusDocument& a, const CorpusDocument& b) { return a.url < b.url; });
  for (const auto& doc : documents_) {
    for (const auto& term : normalized_terms(doc.title + " " + doc.body)) {
      index_[term].insert(doc.url);
    }
  }
}

Corpus Corpus::from_jsonl_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("corpus file not found: " + path);
  std::vector<CorpusDocument> docs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line);
    docs.push_back({j.at("url").get<std::string>(), j.value("title", ""), j.value("body", "")});
  }
  return Corpus(std::move(docs));
}

Corpus Corpus::from_json_array(const nlohmann::json& docs) {
  std::vector<CorpusDocument> out;
  for (const auto& j : docs) {
    out.push_back({j.at("url").get<std::string>(), j.value("title", ""), j.value("body", "")});
  }
  return Corpus(std::move(out));
}

nlohmann::json Corpus::to_json_array() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& doc : documents_) {
    arr.push_back({{"url", doc.url}, {"title", doc.title}, {"body", doc.body}});
  }
  return arr;
}

std::string Corpus::make_snippet(const CorpusDocument& doc,
                                 const std::vector<std::string>& query_terms) const {
  if (doc.body.size() <= kSnippetChars) return doc.body;

  // Best 200-char window = the one covering the most distinct query terms,
  // earliest on ties.
  std::string lower_body;
  lower_body.reserve(doc.body.size());
  for (char c : doc.body) {
    lower_body += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }

  std::vector<size_t> starts = {0};
  for (const auto& term : query_terms) {
    size_t pos = lower_body.find(term);
    while (pos != std::string::npos) {
      starts.push_back(pos);
      pos = lower_body.find(term, pos + 1);
    }
  }
  std::sort(starts.begin(), starts.end());

  size_t best_start = 0;
  size_t best_count = 0;
  for (size_t start : starts) {
    if (start + kSnippetChars > doc.body.size()) {
      start = doc.body.size() - kSnippetChars;
    }
    std::string window = lower_body.substr(start, kSnippetChars);
    size_t count = 0;
    for (const auto& term : query_terms) {
      if (window.find(term) != std::string::npos) ++count;
    }
    if (count > best_count) {
      best_count = count;
      best_start = start;
    }
  }
  return doc.body.substr(best_start, kSnippetChars);
}

std::vector<SearchHit> Corpus::search(const std::string& query, int top_k) const {
  std::vector<std::string> terms = normalized_terms(query);
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());

  std::map<std::string, size_t> overlap;  // url -> distinct matched terms
  for (const auto& term : terms) {
    auto it = index_.find(term);
    if (it == index_.end()) continue;
    for (const auto& url : it->second) ++overlap[url];
  }

  std::vector<std::pair<std::string, size_t>> ranked(overlap.begin(), overlap.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (top_k >= 0 && ranked.size() > static_cast<size_t>(top_k)) ranked.resize(top_k);

  std::vector<SearchHit> hits;
  for (const auto& [url, count] : ranked) {
    auto it = std::lower_bound(documents_.begin(), documents_.end(), url,
                               [](const CorpusDocument& d, const std::string& u) { return d.url < u; });
    hits.push_back({url, it->title, make_snippet(*it, terms)});
  }
  return hits;
}

std::vector<std::vector<SearchHit>> Corpus::search_batch(const std::vector<std::string>& queries,
                                                         int top_k) const {
  std::vector<std::vector<SearchHit>> out;
  out.reserve(queries.size());
  for (const auto& query : queries) out.push_back(search(query, top_k));
  return out;
}

std::optional<std::string> Corpus::visit(const std::string& url) const {
  auto it = std::lower_bound(documents_.begin(), documents_.end(), url,
                             [](const CorpusDocument& d, const std::string& u) { return d.url < u; });
  if (it == documents_.end() || it->url != url) return std::nullopt;
  return it->body;
}

}  // namespace agenthub

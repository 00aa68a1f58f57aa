#include "agenthub/core/answer.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

namespace agenthub {
namespace {

std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool starts_with_key(std::string_view line, std::string_view key) {
  size_t b = 0;
  while (b < line.size() && std::isspace(static_cast<unsigned char>(line[b]))) ++b;
  if (line.size() - b < key.size()) return false;
  for (size_t i = 0; i < key.size(); ++i) {
    char a = static_cast<char>(std::tolower(static_cast<unsigned char>(line[b + i])));
    if (a != key[i]) return false;
  }
  return true;
}

std::string after_colon(std::string_view line) {
  size_t pos = line.find(':');
  if (pos == std::string_view::npos) return "";
  return trim(line.substr(pos + 1));
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  size_t start = 0;
  while (start <= text.size()) {
    size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    std::string_view line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = nl + 1;
  }
  return lines;
}

}  // namespace

std::optional<FinalAnswer> parse_final_answer(std::string_view agent_output) {
  std::optional<std::string> answer;
  std::optional<double> confidence;

  for (std::string_view line : split_lines(agent_output)) {
    if (!answer && starts_with_key(line, "exact answer:")) {
      answer = after_colon(line);
    } else if (!confidence && starts_with_key(line, "confidence:")) {
      std::string rest = after_colon(line);
      char* end = nullptr;
      double value = std::strtod(rest.c_str(), &end);
      if (end != rest.c_str() && std::isfinite(value)) {
        // "65%" and bare "65" both mean percent; fractions in [0,1] pass
        // through unchanged.
        if (rest.find('%') != std::string::npos || value > 1.0) value /= 100.0;
        confidence = std::clamp(value, 0.0, 1.0);
      }
    }
  }

  if (!answer) return std::nullopt;
  FinalAnswer result;
  result.answer = *answer;
  result.confidence = confidence.value_or(0.5);
  result.confidence_present = confidence.has_value();
  return result;
}

std::string format_final_answer(const std::string& answer, double confidence) {
  int percent = static_cast<int>(std::lround(std::clamp(confidence, 0.0, 1.0) * 100.0));
  return "Exact Answer: " + answer + "\nConfidence: " + std::to_string(percent) + "%";
}

}  // namespace agenthub

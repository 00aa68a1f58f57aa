#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace agenthub {

struct FinalAnswer {
  std::string answer;
  double confidence = 0.5;
  bool confidence_present = false;
};

// Extracts the "Exact Answer:" line and the "Confidence: <n>%" line from an
// agent's terminal message (keys matched case-insensitively). Returns nullopt
// when no Exact Answer line exists; a missing confidence defaults to 0.5 and
// any parsed value is clamped to [0,1].
std::optional<FinalAnswer> parse_final_answer(std::string_view agent_output);

// Inverse of parse_final_answer for integer-percent confidences.
std::string format_final_answer(const std::string& answer, double confidence);

}  // namespace agenthub

#pragma once

#include <cstdint>
#include <functional>
#include <string_view>

#include "agenthub/core/types.hpp"

namespace agenthub {

// Pluggable token counter. Must be deterministic, return 0 on "", and be
// monotone under concatenation. Budgets over multi-part contexts are the sum
// of per-part counts.
using TokenCounter = std::function<int64_t(std::string_view)>;

// Default counter: ceil(byte_length / 4). Backend-free stand-in for a real
// tokenizer; live runs may substitute backend-reported usage.
int64_t default_count_tokens(std::string_view text);

const TokenCounter& default_token_counter();

// Longest prefix of `text` whose count stays within `max_tokens`.
std::string truncate_to_tokens(std::string_view text, int64_t max_tokens,
                               const TokenCounter& counter);

// Deterministic text rendering of an action (reasoning + tool line), used by
// token accounting and by the hub when serializing episodes.
std::string render_action(const ActionRecord& action);

// token_cost of a step = count(rendered action) + count(observation).
int64_t step_token_cost(const ActionRecord& action, std::string_view observation,
                        const TokenCounter& counter);

int64_t episode_token_total(const Episode& episode);

// Total size of all five context parts (preamble, own notes, teammate notes,
// readouts, active steps).
int64_t context_tokens(const WorkingContext& ctx, const TokenCounter& counter);

}  // namespace agenthub

#pragma once

#include <string>
#include <string_view>

namespace agenthub::prompts {

// Hub prompt texts. The copies under assets/prompts/ are the shipped template
// files; a conformance test checks that these constants and the files agree
// modulo whitespace.

extern const std::string_view kMemoryManagerSystem;
extern const std::string_view kWindowSummaryUserTemplate;   // {window_content}
extern const std::string_view kConsultSystem;
extern const std::string_view kConsultIncrementalUserTemplate;  // {goal} {previous_summary} {page_content}
extern const std::string_view kMemoryToolDescription;
extern const std::string_view kMemoryToolPagesParam;
extern const std::string_view kMemoryToolGoalParam;

std::string fill_window_summary(std::string_view window_content);
std::string fill_consult_incremental(std::string_view goal, std::string_view previous_summary,
                                     std::string_view page_content);

// Collapses every whitespace run to a single space and trims the ends; the
// conformance checksum is computed over this form.
std::string normalize_whitespace(std::string_view text);

// FNV-1a 64-bit hex digest of the whitespace-normalized text.
std::string normalized_checksum(std::string_view text);

}  // namespace agenthub::prompts

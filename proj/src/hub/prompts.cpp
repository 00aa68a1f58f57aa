#include "agenthub/hub/prompts.hpp"

#include <cctype>
#include <cstdint>

namespace agenthub::prompts {

const std::string_view kMemoryManagerSystem =
    R"(You are a memory manager for a research agent. Your job is to compress the prior conversation and tool-use history into a concise working memory that helps the next agent continue the task without rereading the full transcript.

Write a factual summary of what has already been explored, tried, confirmed, and left unresolved. Preserve only information that is useful for continuing the work. Omit chit-chat, stylistic details, and repeated content unless it affects the task.

Your summary should prioritize:
1. The user's goal, constraints, and preferences.
2. Key facts established during the conversation.
3. Tools used and the most important results from them.
4. Partial conclusions, promising leads, and failed approaches.
5. Open questions, uncertainties, and what still needs to be done next.

When relevant, include: filenames, URLs, document names, entities, dates, and parameters already examined; specific findings from tool outputs; decisions already made and why; unresolved blockers or ambiguities.

Requirements: be concise but information-dense; be factual and do not invent details; distinguish clearly between confirmed findings and tentative inferences; focus on continuation value; avoid full sentences when bullets are more efficient; do not address the user; do not add preamble or commentary; output only the summary.)";

const std::string_view kWindowSummaryUserTemplate =
    R"(Previous conversation and tool-use history:
{window_content}

Summarize it for continuation. Output only the summary.)";

const std::string_view kConsultSystem =
    R"(You are a research assistant. Given a research goal and retrieved pages from past explorations, extract the information that is relevant to the goal and produce a concise, focused summary.

Rules:
1. Keep only information that is directly relevant to the research goal. Preserve important facts, findings, dates, names, and evidence when present.
2. Incorporate prior extracted results when provided. Do not drop previously established key information unless it is contradicted or irrelevant.
3. Add important new information from the current page, while avoiding repetition.
4. Distinguish clearly between confirmed information and uncertain or incomplete information.
5. Be concise, factual, and information-dense.
6. Output only the extracted information and summary.)";

const std::string_view kConsultIncrementalUserTemplate =
    R"(Research goal:
{goal}

Previous extracted results:
{previous_summary}

Current page:
{page_content}

Integrate the previous results with the current page, keeping only information relevant to the goal. Output only the updated extracted information and summary.)";

const std::string_view kMemoryToolDescription =
    R"(Recall and summarize the raw content of relevant past explorations from your memory pages. Use this tool in the following cases: (1) you need to call memory to recover the detailed content from those pages, but earlier conversation turns are no longer available in the current context; (2) you need to look up specific details and verify or cross-check the content stored in the Exploration Memory. First read the bullet-point summaries under each page in the Exploration Memory section, then choose ONLY the pages whose exploration directions are directly relevant to your current goal.)";

const std::string_view kMemoryToolPagesParam =
    R"(array of integer page numbers to retrieve (max 5); read the per-page summaries in Exploration Memory and select only the relevant ones)";

const std::string_view kMemoryToolGoalParam =
    R"(the specific information you want to extract from these pages)";

namespace {

std::string replace_all(std::string text, std::string_view key, std::string_view value) {
  size_t pos = 0;
  while ((pos = text.find(key, pos)) != std::string::npos) {
    text.replace(pos, key.size(), value);
    pos += value.size();
  }
  return text;
}

}  // namespace

std::string fill_window_summary(std::string_view window_content) {
  return replace_all(std::string(kWindowSummaryUserTemplate), "{window_content}", window_content);
}

std::string fill_consult_incremental(std::string_view goal, std::string_view previous_summary,
                                     std::string_view page_content) {
  std::string text(kConsultIncrementalUserTemplate);
  text = replace_all(std::move(text), "{goal}", goal);
  text = replace_all(std::move(text), "{previous_summary}", previous_summary);
  text = replace_all(std::move(text), "{page_content}", page_content);
  return text;
}

std::string normalize_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool in_space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      in_space = true;
      continue;
    }
    if (in_space && !out.empty()) out += ' ';
    in_space = false;
    out += c;
  }
  return out;
}

std::string normalized_checksum(std::string_view text) {
  std::string normalized = normalize_whitespace(text);
  uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : normalized) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  char buf[17];
  snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return std::string(buf);
}

}  // namespace agenthub::prompts

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "visionflow/core/types.hpp"

namespace visionflow::prompting {

/// A paired (request, canonical proposal text) demonstration.
struct ContextExample {
  std::string input;
  std::string output;

  friend bool operator==(const ContextExample&, const ContextExample&) = default;
};

struct PromptConfig {
  std::vector<OperationKind> op_candidates;
  std::vector<ContextExample> examples;
  int max_examples = 4;

  friend bool operator==(const PromptConfig&, const PromptConfig&) = default;
};

/// Throws Error(InvalidConfig) if the candidate list is empty, max_examples
/// is below one, or an example output does not parse.
void validate_prompt_config(const PromptConfig& cfg);

/// Full operation vocabulary and a handful of demonstrations drawn from the
/// worked examples the planner is expected to reproduce.
PromptConfig default_prompt_config();

/// Layout:
///   Please generate action proposals based on the following operation
///   candidates: "c1", "c2". The output should be as concise as possible.
///   <blank>
///   Input: <example input>
///   Output: <example output>
///   <blank>
///   ...
///   Input: <user_input>
///   Output:
/// The instruction is a single line; there is no trailing newline.
std::string build_prompt(const PromptConfig& cfg, std::string_view user_input);

/// Recovers the final "Input:" stanza from a prompt built by build_prompt.
/// Returns the whole text when no stanza is found.
std::string extract_user_input(std::string_view prompt);

}  // namespace visionflow::prompting

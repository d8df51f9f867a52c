#include "visionflow/prompting/prompt.hpp"

#include <algorithm>

#include "visionflow/dsl/proposals.hpp"
#include "visionflow/error.hpp"

namespace visionflow::prompting {

void validate_prompt_config(const PromptConfig& cfg) {
  if (cfg.op_candidates.empty()) throw Error(ErrorKind::InvalidConfig, "op_candidates must not be empty");
  if (cfg.max_examples < 1) throw Error(ErrorKind::InvalidConfig, "max_examples must be at least 1");
  for (const ContextExample& ex : cfg.examples) {
    const auto parsed = dsl::try_parse_proposals(ex.output);
    if (!parsed.set) {
      throw Error(ErrorKind::InvalidConfig, "example output does not parse: " + ex.output);
    }
  }
}

PromptConfig default_prompt_config() {
  PromptConfig cfg;
  cfg.op_candidates.assign(kAllOperations.begin(), kAllOperations.end());
  cfg.examples = {
      {"highlight dogs and frogs in the image",
       R"("locate" dogs; "segment" dogs; "locate" frogs; "segment" frogs;)"},
      {"Find the guitar and segment it", R"("locate" guitar; "segment" guitar;)"},
      {"Replace the front car with a different type",
       R"("locate" front car; "segment" front car; "edit" front car :: replace with a different type;)"},
      {"Please generate a mountain far away", R"("generate" image :: please generate a mountain far away;)"},
  };
  cfg.max_examples = 4;
  return cfg;
}

std::string build_prompt(const PromptConfig& cfg, std::string_view user_input) {
  if (collapse_whitespace(user_input).empty()) throw Error(ErrorKind::EmptyInput, "user input is empty");
  std::string out = "Please generate action proposals based on the following operation candidates: ";
  for (std::size_t i = 0; i < cfg.op_candidates.size(); ++i) {
    if (i > 0) out += ", ";
    out += '"';
    out += op_name(cfg.op_candidates[i]);
    out += '"';
  }
  out += ". The output should be as concise as possible.\n\n";
  const std::size_t n = std::min(cfg.examples.size(), static_cast<std::size_t>(std::max(cfg.max_examples, 0)));
  for (std::size_t i = 0; i < n; ++i) {
    out += "Input: " + cfg.examples[i].input + "\n";
    out += "Output: " + cfg.examples[i].output + "\n\n";
  }
  out += "Input: ";
  out += user_input;
  out += "\nOutput:";
  return out;
}

std::string extract_user_input(std::string_view prompt) {
  constexpr std::string_view kInput = "Input: ";
  constexpr std::string_view kOutput = "\nOutput:";
  std::size_t start = prompt.rfind(std::string("\n") + std::string(kInput));
  if (start == std::string_view::npos) {
    if (prompt.substr(0, kInput.size()) != kInput) return std::string(prompt);
    start = 0;
  } else {
    start += 1;
  }
  start += kInput.size();
  const std::size_t end = prompt.find(kOutput, start);
  return std::string(prompt.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
}

}  // namespace visionflow::prompting

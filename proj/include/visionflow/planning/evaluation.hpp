#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "visionflow/core/types.hpp"
#include "visionflow/prompting/backend.hpp"
#include "visionflow/prompting/prompt.hpp"

namespace visionflow::planning {

struct CorpusItem {
  std::string input;
  ProposalSet gold;
};

/// JSON lines, one {"input": str, "gold": str} per line; gold is canonical
/// proposal text and must validate. Blank lines are skipped.
std::vector<CorpusItem> parse_corpus(const std::string& jsonl);
std::vector<CorpusItem> load_corpus(const std::filesystem::path& path);

struct ItemResult {
  std::string input;
  bool parsed = false;
  bool exact_match = false;
  double discrepancy = 1.0;
  double regularizer = 0.0;
  std::string selected;  // canonical text, empty when nothing parsed
};

struct EvaluationReport {
  std::string backend;
  std::size_t items = 0;
  std::size_t parse_failures = 0;
  double exact_match_rate = 0.0;
  double mean_discrepancy = 0.0;
  /// Averaged over items that produced a parsable candidate.
  double mean_regularizer = 0.0;
  std::vector<ItemResult> per_item;
};

/// For each item: prompt, generate candidates, parse, select_best, compare
/// with gold. Items with no parsable candidate count as parse failures with
/// discrepancy 1. Backend availability errors propagate.
EvaluationReport evaluate_backend(prompting::PlannerBackend& backend, const std::vector<CorpusItem>& corpus,
                                  const prompting::PromptConfig& cfg, double lambda = 1.0);

nlohmann::ordered_json report_to_json(const EvaluationReport& report);

/// Schema check for a serialized report; returns a list of violations.
std::vector<std::string> check_report_schema(const nlohmann::json& j);

}  // namespace visionflow::planning

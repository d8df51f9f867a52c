#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "visionflow/prompting/backend.hpp"
#include "visionflow/prompting/prompt.hpp"

namespace visionflow::engine {

struct EngineConfig {
  /// Minimum verifier score for an attempt to be accepted.
  double verify_threshold = 0.75;
  /// Extra attempts per model after a low verifier score.
  int retry_budget = 2;
  int max_parallel = 4;
  double lambda = 1.0;
  std::filesystem::path run_dir = "runs";
  std::optional<std::string> verifier_endpoint;
  std::chrono::milliseconds executor_deadline{120000};

  friend bool operator==(const EngineConfig&, const EngineConfig&) = default;
};

/// Throws Error(InvalidConfig).
void validate_config(const EngineConfig& cfg);

/// Everything a config file can set. Flags given on the command line are
/// applied on top of a loaded file.
struct AppConfig {
  EngineConfig engine;
  prompting::PromptConfig prompt = prompting::default_prompt_config();
  /// Tried in order; the rule-based planner is always the last resort.
  std::vector<prompting::PlannerBackendDescriptor> backends;
  std::optional<std::filesystem::path> registry_path;
};

/// Recognised keys: verify_threshold, retry_budget, max_parallel, lambda,
/// run_dir, verifier_endpoint, executor_deadline_ms, registry,
/// prompt {op_candidates, examples [{input, output}], max_examples},
/// backends [{id, kind, endpoint, n_candidates, deadline_ms, script}].
AppConfig app_config_from_json(const nlohmann::json& j);
AppConfig load_app_config(const std::filesystem::path& path);

/// Applies the subset of EngineConfig fields present in `overrides`
/// (same key names as the config file). Throws InvalidRequest on bad types.
EngineConfig apply_overrides(EngineConfig base, const nlohmann::json& overrides);

}  // namespace visionflow::engine

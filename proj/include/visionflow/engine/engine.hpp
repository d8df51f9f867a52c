#pragma once

#include <memory>
#include <string>
#include <vector>

#include "visionflow/engine/config.hpp"
#include "visionflow/engine/integrate.hpp"
#include "visionflow/engine/run_store.hpp"
#include "visionflow/engine/scheduler.hpp"
#include "visionflow/exec/executor.hpp"
#include "visionflow/exec/verifier.hpp"
#include "visionflow/prompting/backend.hpp"
#include "visionflow/prompting/prompt.hpp"
#include "visionflow/registry/registry.hpp"

namespace visionflow::engine {

struct PlanOutcome {
  std::string prompt;
  std::string planner_backend;
  std::vector<std::string> candidates;
  ProposalSet selected;
  planning::ProposalScore score;
  /// Every configured backend failed and the rule-based planner was used.
  bool fell_back = false;
};

struct RunOutcome {
  RunRecord record;
  std::vector<Composite> composites;
};

struct EngineParts {
  prompting::PromptConfig prompt = prompting::default_prompt_config();
  std::vector<std::shared_ptr<prompting::PlannerBackend>> backends;
  std::shared_ptr<registry::Registry> registry;
  std::shared_ptr<exec::SceneCatalog> scenes;
  std::shared_ptr<exec::ExecutorResolver> resolver;
  std::shared_ptr<exec::Verifier> verifier;
};

/// Request -> prompt -> candidate proposal sets -> selected set -> plan DAG
/// -> scheduled execution with verification -> composites -> stored record.
class Engine {
 public:
  /// Missing parts are filled with defaults: the mock registry, an empty
  /// scene catalog, a resolver over it, and DefaultVerifier.
  Engine(EngineConfig config, EngineParts parts);
  static std::unique_ptr<Engine> from_config(const AppConfig& cfg);

  /// Throws EmptyInput or PlanningFailed.
  PlanOutcome plan(const std::string& request, double lambda) const;
  PlanOutcome plan(const std::string& request) const { return plan(request, config_.lambda); }

  RunOutcome run_request(const std::string& request, const std::vector<ImageRef>& images);
  /// `cfg` replaces the engine configuration for this run only.
  RunOutcome run_request(const std::string& request, const std::vector<ImageRef>& images, const EngineConfig& cfg);

  /// Direct Locate call through the fallback chain, without verification.
  std::vector<Detection> label_objects(const std::string& object, const ImageRef& image) const;

  /// Probes a path (scene JSON or PPM/PGM) into an image reference.
  ImageRef image_from_path(const std::string& path) const;

  void set_observer(ScheduleObserver* observer) { observer_ = observer; }

  const EngineConfig& config() const noexcept { return config_; }
  registry::Registry& registry() noexcept { return *parts_.registry; }
  exec::SceneCatalog& scenes() noexcept { return *parts_.scenes; }
  exec::ExecutorResolver& resolver() noexcept { return *parts_.resolver; }
  RunStore& store() noexcept { return store_; }

 private:
  EngineConfig config_;
  EngineParts parts_;
  RunStore store_;
  SerialGates gates_;
  ScheduleObserver* observer_ = nullptr;
};

}  // namespace visionflow::engine

#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "visionflow/core/types.hpp"
#include "visionflow/exec/types.hpp"
#include "visionflow/registry/registry.hpp"

namespace visionflow::exec {

/// A model reachable by the engine. Implementations receive immutable input
/// and must be safe to call concurrently unless registered as Serial.
class Executor {
 public:
  virtual ~Executor() = default;
  virtual ExecOutput execute(const ExecInput& input) = 0;
};

/// Loads and caches scene ground truth by uri. Thread-safe.
class SceneCatalog {
 public:
  /// nullptr for raster images. Throws InvalidScene for a bad scene file.
  std::shared_ptr<const SceneSpec> ground_for(const ImageRef& image) const;
  /// Registers an in-memory scene under `uri` (used by tests and tools that
  /// synthesize scenes without touching disk).
  void put(const std::string& uri, SceneSpec scene);

 private:
  mutable std::mutex mu_;
  mutable std::map<std::string, std::shared_ptr<const SceneSpec>> cache_;
};

/// Maps model descriptors onto executors: explicit bindings by model id
/// first, then builtin mocks by endpoint name, then remote endpoints.
class ExecutorResolver {
 public:
  explicit ExecutorResolver(std::shared_ptr<const SceneCatalog> scenes,
                            std::chrono::milliseconds remote_deadline = std::chrono::seconds(120));

  void bind(const std::string& model_id, std::shared_ptr<Executor> executor);
  /// Throws Error(CapabilityMismatch) when nothing can serve the model.
  std::shared_ptr<Executor> resolve(const registry::ModelDescriptor& model) const;
  const std::shared_ptr<const SceneCatalog>& scenes() const noexcept { return scenes_; }

 private:
  std::shared_ptr<const SceneCatalog> scenes_;
  std::chrono::milliseconds remote_deadline_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Executor>> bound_;
  mutable std::map<std::string, std::shared_ptr<Executor>> builtins_;
};

/// Checks the model's capabilities, then runs it. Throws CapabilityMismatch,
/// RemoteUnavailable or RemoteMalformed.
ExecOutput execute(const registry::ModelDescriptor& model, const ExecInput& input, const ExecutorResolver& resolver);

}  // namespace visionflow::exec

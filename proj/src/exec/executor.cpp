#include "visionflow/exec/executor.hpp"

#include "visionflow/core/image_io.hpp"
#include "visionflow/error.hpp"
#include "visionflow/exec/mock.hpp"
#include "visionflow/exec/remote.hpp"

namespace visionflow::exec {

std::shared_ptr<const SceneSpec> SceneCatalog::ground_for(const ImageRef& image) const {
  {
    std::lock_guard lock(mu_);
    if (auto it = cache_.find(image.uri); it != cache_.end()) return it->second;
  }
  if (image.kind != ImageSourceKind::Scene) return nullptr;
  auto scene = std::make_shared<const SceneSpec>(load_scene(image.uri));
  std::lock_guard lock(mu_);
  return cache_.emplace(image.uri, std::move(scene)).first->second;
}

void SceneCatalog::put(const std::string& uri, SceneSpec scene) {
  validate_scene(scene);
  std::lock_guard lock(mu_);
  cache_[uri] = std::make_shared<const SceneSpec>(std::move(scene));
}

ExecutorResolver::ExecutorResolver(std::shared_ptr<const SceneCatalog> scenes, std::chrono::milliseconds remote_deadline)
    : scenes_(std::move(scenes)), remote_deadline_(remote_deadline) {}

void ExecutorResolver::bind(const std::string& model_id, std::shared_ptr<Executor> executor) {
  std::lock_guard lock(mu_);
  bound_[model_id] = std::move(executor);
}

std::shared_ptr<Executor> ExecutorResolver::resolve(const registry::ModelDescriptor& model) const {
  std::lock_guard lock(mu_);
  if (auto it = bound_.find(model.id); it != bound_.end()) return it->second;
  if (model.is_remote()) return std::make_shared<RemoteExecutor>(*model.endpoint, remote_deadline_);
  const std::string name = model.endpoint.value_or(model.id);
  if (auto it = builtins_.find(name); it != builtins_.end()) return it->second;
  std::shared_ptr<Executor> made;
  if (name == "mock-detector") {
    made = std::make_shared<MockDetector>(scenes_);
  } else if (name == "mock-segmenter") {
    made = std::make_shared<MockSegmenter>(scenes_);
  } else if (name == "mock-generator") {
    made = std::make_shared<MockGenerator>();
  } else if (name == "mock-captioner") {
    made = std::make_shared<MockCaptioner>(scenes_);
  } else if (name == "engine-native") {
    made = std::make_shared<NativeIntegrator>();
  } else {
    throw Error(ErrorKind::CapabilityMismatch, model.id + ": no executor for endpoint '" + name + "'");
  }
  builtins_[name] = made;
  return made;
}

ExecOutput execute(const registry::ModelDescriptor& model, const ExecInput& input, const ExecutorResolver& resolver) {
  if (!model.can(input.op)) {
    throw Error(ErrorKind::CapabilityMismatch, model.id + " cannot " + std::string(op_name(input.op)));
  }
  return resolver.resolve(model)->execute(input);
}

}  // namespace visionflow::exec

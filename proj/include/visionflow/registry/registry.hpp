#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "visionflow/core/types.hpp"

namespace visionflow::registry {

enum class ConcurrencyClass { Concurrent, Serial };

struct ModelDescriptor {
  std::string id;
  std::set<OperationKind> capabilities;
  double quality = 0.0;
  double cost = 0.0;
  /// Can restrict its work to caller-provided boxes.
  bool accepts_regions = false;
  ConcurrencyClass concurrency_class = ConcurrencyClass::Concurrent;
  /// "http://..." for remote executors, otherwise the name of a builtin.
  std::optional<std::string> endpoint;

  bool can(OperationKind op) const { return capabilities.contains(op); }
  bool is_remote() const;
  friend bool operator==(const ModelDescriptor&, const ModelDescriptor&) = default;
};

/// Throws Error(InvalidDescriptor).
void validate_descriptor(const ModelDescriptor& desc);

/// Quality descending, then cost ascending, then id ascending.
bool policy_less(const ModelDescriptor& a, const ModelDescriptor& b);

/// Thread-safe capability catalog. Selections take a shared lock and see a
/// consistent snapshot; registration is exclusive.
class Registry {
 public:
  Registry() = default;
  Registry(const Registry& other);
  Registry& operator=(const Registry& other);

  /// Throws DuplicateModelId or InvalidDescriptor.
  void register_model(ModelDescriptor desc);
  std::vector<ModelDescriptor> list() const;
  std::optional<ModelDescriptor> find(const std::string& id) const;
  std::size_t size() const;

  /// Highest-ranked capable model not in `exclude`. Throws NoCapableModel.
  ModelDescriptor select_model(OperationKind op, const std::set<std::string>& exclude = {}) const;
  /// Every capable model in policy order. Throws NoCapableModel.
  std::vector<ModelDescriptor> fallback_chain(OperationKind op) const;

 private:
  mutable std::shared_mutex mu_;
  std::vector<ModelDescriptor> models_;
};

/// Mock roster: detector, region-aware segmenter, generator, captioner and
/// the engine-native integrator.
Registry default_registry();

nlohmann::json descriptor_to_json(const ModelDescriptor& desc);
/// Throws InvalidDescriptor on schema violations.
ModelDescriptor descriptor_from_json(const nlohmann::json& j);

nlohmann::json registry_to_json(const Registry& reg);
Registry registry_from_json(const nlohmann::json& j);
Registry load_registry(const std::filesystem::path& path);
void save_registry(const Registry& reg, const std::filesystem::path& path);

}  // namespace visionflow::registry

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "visionflow/engine/config.hpp"
#include "visionflow/engine/integrate.hpp"
#include "visionflow/engine/scheduler.hpp"
#include "visionflow/planning/dag.hpp"
#include "visionflow/planning/scoring.hpp"

namespace visionflow::engine {

/// Everything needed to audit or replay a run.
struct RunRecord {
  std::string run_id;
  std::string request;
  EngineConfig config;
  std::string prompt;
  std::string planner_backend;
  /// Raw texts returned by the planner, including ones that failed to parse.
  std::vector<std::string> candidates;
  ProposalSet selected;
  planning::ProposalScore score;
  planning::PlanDAG dag;
  std::vector<NodeResult> node_results;
  std::vector<ImageRef> artifacts;
  nlohmann::ordered_json summary;
  std::int64_t started_at_ms = 0;
  std::int64_t finished_at_ms = 0;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

nlohmann::ordered_json record_to_json(const RunRecord& rec);
/// Throws Error(StorageFailure) on schema violations.
RunRecord record_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json node_result_to_json(const NodeResult& r);
nlohmann::ordered_json dag_to_json(const planning::PlanDAG& dag);

/// Directory-per-run store under `root`:
///   root/<run_id>/record.json, root/<run_id>/composite-<i>.ppm, root/index.json
/// A run is written to a hidden temporary directory and renamed into place,
/// so readers see it completely or not at all. index.json lists published
/// runs in id order and is rebuilt by recover() after an interrupted write.
/// The root directory is created on the first persist.
class RunStore {
 public:
  explicit RunStore(std::filesystem::path root);

  /// Throws StorageFailure.
  void persist(const RunRecord& rec, const std::vector<Composite>& composites);
  /// Throws RunNotFound.
  RunRecord load(const std::string& run_id) const;
  /// Raw bytes of "record.json" or one of the run's artifacts. Throws
  /// RunNotFound for unknown runs or names.
  std::string load_artifact(const std::string& run_id, const std::string& name) const;
  std::vector<std::string> index() const;
  bool contains(const std::string& run_id) const;

  /// Deletes temporary directories left by interrupted writes and rewrites
  /// the index from the published run directories. Returns the number of
  /// leftovers removed.
  std::size_t recover();

  /// Test hook called before each write stage ("files", "publish",
  /// "index"); throwing from it simulates a crash at that point.
  void set_fault_hook(std::function<void(std::string_view stage)> hook);

  const std::filesystem::path& root() const noexcept { return root_; }

 private:
  void write_index(const std::vector<std::string>& ids) const;
  std::filesystem::path run_path(const std::string& run_id) const;

  std::filesystem::path root_;
  mutable std::mutex mu_;
  std::function<void(std::string_view)> fault_hook_;
};

}  // namespace visionflow::engine

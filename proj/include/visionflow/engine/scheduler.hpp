#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "visionflow/engine/config.hpp"
#include "visionflow/exec/executor.hpp"
#include "visionflow/exec/verifier.hpp"
#include "visionflow/planning/dag.hpp"
#include "visionflow/registry/registry.hpp"

namespace visionflow::engine {

enum class NodeStatus { Succeeded, FailedVerification, FailedExecution, Skipped };

std::string_view node_status_name(NodeStatus s) noexcept;
NodeStatus node_status_from_name(std::string_view name);

enum class AttemptOutcome { Accepted, BelowThreshold, ExecutionError, VerifierError };

std::string_view attempt_outcome_name(AttemptOutcome o) noexcept;
AttemptOutcome attempt_outcome_from_name(std::string_view name);

struct Attempt {
  std::string model_id;
  AttemptOutcome outcome = AttemptOutcome::ExecutionError;
  /// Lowest verifier score over the node's images; absent when nothing was
  /// verified.
  std::optional<double> score;
  std::string detail;

  friend bool operator==(const Attempt&, const Attempt&) = default;
};

/// What a node produced for one input image.
struct ImageOutput {
  int image_index = 0;
  exec::ExecOutput output;
  exec::VerifierScoreRecord verification;

  friend bool operator==(const ImageOutput&, const ImageOutput&) = default;
};

struct NodeResult {
  int node_id = 0;
  NodeStatus status = NodeStatus::Skipped;
  /// Model of the last attempt (the accepted one on success).
  std::optional<std::string> model_id;
  std::vector<Attempt> attempts;
  /// Output of the accepted attempt, or of the best rejected one.
  std::vector<ImageOutput> outputs;
  /// Why the node did not run or failed without attempts.
  std::string detail;

  std::optional<double> best_score() const;
  friend bool operator==(const NodeResult&, const NodeResult&) = default;
};

/// Receives scheduling events from worker threads; must be thread-safe.
class ScheduleObserver {
 public:
  virtual ~ScheduleObserver() = default;
  virtual void node_started(int /*node_id*/) {}
  virtual void node_finished(const NodeResult& /*result*/) {}
};

/// Shared collaborators for one run.
struct RunContext {
  EngineConfig config;
  std::shared_ptr<const registry::Registry> registry;
  std::shared_ptr<const exec::ExecutorResolver> resolver;
  std::shared_ptr<exec::Verifier> verifier;
  ScheduleObserver* observer = nullptr;
};

/// One mutex per Serial model id, shared by everything that can run that
/// model concurrently.
class SerialGates {
 public:
  std::mutex& gate(const std::string& model_id);

 private:
  std::mutex mu_;
  std::map<std::string, std::unique_ptr<std::mutex>> gates_;
};

/// Executes one node: each capable model in fallback order gets up to
/// 1 + retry_budget attempts while it produces low-scoring output, and is
/// abandoned straight away on an execution error. `upstream` holds the
/// results of the node's dependencies.
NodeResult run_node(const planning::PlanNode& node, const std::vector<ImageRef>& images,
                    const std::vector<const NodeResult*>& upstream, const RunContext& ctx, SerialGates& gates);

/// Runs every node once its dependencies are done, at most max_parallel at a
/// time. A node whose dependency did not succeed is Skipped. Results are in
/// node order.
std::vector<NodeResult> schedule(const planning::PlanDAG& dag, const RunContext& ctx);

/// Shares gates across runs (the engine keeps one per process).
std::vector<NodeResult> schedule(const planning::PlanDAG& dag, const RunContext& ctx, SerialGates& gates);

}  // namespace visionflow::engine

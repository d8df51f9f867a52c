#pragma once

#include <chrono>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace visionflow::prompting {

enum class BackendKind { RuleBased, Remote, Scripted };

std::string_view backend_kind_name(BackendKind kind) noexcept;

struct PlannerBackendDescriptor {
  std::string id = "rule-based";
  BackendKind kind = BackendKind::RuleBased;
  /// Base URL; present iff kind == Remote.
  std::optional<std::string> endpoint;
  int n_candidates = 1;
  std::chrono::milliseconds deadline{30000};
  /// Reply file for Scripted backends.
  std::optional<std::string> script_path;

  friend bool operator==(const PlannerBackendDescriptor&, const PlannerBackendDescriptor&) = default;
};

/// Throws Error(InvalidConfig) when the descriptor breaks its invariants.
void validate_descriptor(const PlannerBackendDescriptor& desc);

/// Produces raw candidate proposal texts for a prompt. Implementations must
/// be safe to call from several threads.
class PlannerBackend {
 public:
  virtual ~PlannerBackend() = default;
  virtual const PlannerBackendDescriptor& descriptor() const noexcept = 0;
  /// Between 1 and n_candidates strings. Throws BackendUnavailable or
  /// BackendMalformed.
  virtual std::vector<std::string> generate(const std::string& prompt) = 0;
};

/// Runs the deterministic intent-table planner on the prompt's final input.
class RuleBasedBackend final : public PlannerBackend {
 public:
  explicit RuleBasedBackend(PlannerBackendDescriptor desc = {});
  const PlannerBackendDescriptor& descriptor() const noexcept override { return desc_; }
  std::vector<std::string> generate(const std::string& prompt) override;

 private:
  PlannerBackendDescriptor desc_;
};

/// Replays canned replies in order: the i-th call returns the i-th reply list.
class ScriptedBackend final : public PlannerBackend {
 public:
  ScriptedBackend(PlannerBackendDescriptor desc, std::vector<std::vector<std::string>> replies);
  /// Reads {"replies": [[str, ...], ...]} from desc.script_path.
  static std::unique_ptr<ScriptedBackend> from_file(PlannerBackendDescriptor desc);

  const PlannerBackendDescriptor& descriptor() const noexcept override { return desc_; }
  std::vector<std::string> generate(const std::string& prompt) override;
  std::size_t remaining() const;

 private:
  PlannerBackendDescriptor desc_;
  mutable std::mutex mu_;
  std::deque<std::vector<std::string>> replies_;
};

/// POST {endpoint}/v1/complete {"prompt": str, "n": int} -> {"candidates": [str]}
class RemoteBackend final : public PlannerBackend {
 public:
  explicit RemoteBackend(PlannerBackendDescriptor desc);
  const PlannerBackendDescriptor& descriptor() const noexcept override { return desc_; }
  std::vector<std::string> generate(const std::string& prompt) override;

 private:
  PlannerBackendDescriptor desc_;
};

std::unique_ptr<PlannerBackend> make_backend(const PlannerBackendDescriptor& desc);

/// Calls the backend and enforces the reply contract (non-empty, at most
/// n_candidates, every entry non-blank).
std::vector<std::string> generate_candidates(PlannerBackend& backend, const std::string& prompt);

}  // namespace visionflow::prompting

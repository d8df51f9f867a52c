#include "visionflow/engine/scheduler.hpp"

#include <algorithm>
#include <condition_variable>
#include <deque>
#include <thread>

#include "visionflow/core/mask_rle.hpp"
#include "visionflow/error.hpp"

namespace visionflow::engine {

std::string_view node_status_name(NodeStatus s) noexcept {
  switch (s) {
    case NodeStatus::Succeeded: return "succeeded";
    case NodeStatus::FailedVerification: return "failed_verification";
    case NodeStatus::FailedExecution: return "failed_execution";
    case NodeStatus::Skipped: return "skipped";
  }
  return "skipped";
}

NodeStatus node_status_from_name(std::string_view name) {
  for (NodeStatus s : {NodeStatus::Succeeded, NodeStatus::FailedVerification, NodeStatus::FailedExecution,
                       NodeStatus::Skipped}) {
    if (node_status_name(s) == name) return s;
  }
  throw Error(ErrorKind::StorageFailure, "unknown node status '" + std::string(name) + "'");
}

std::string_view attempt_outcome_name(AttemptOutcome o) noexcept {
  switch (o) {
    case AttemptOutcome::Accepted: return "accepted";
    case AttemptOutcome::BelowThreshold: return "below_threshold";
    case AttemptOutcome::ExecutionError: return "execution_error";
    case AttemptOutcome::VerifierError: return "verifier_error";
  }
  return "execution_error";
}

AttemptOutcome attempt_outcome_from_name(std::string_view name) {
  for (AttemptOutcome o : {AttemptOutcome::Accepted, AttemptOutcome::BelowThreshold, AttemptOutcome::ExecutionError,
                           AttemptOutcome::VerifierError}) {
    if (attempt_outcome_name(o) == name) return o;
  }
  throw Error(ErrorKind::StorageFailure, "unknown attempt outcome '" + std::string(name) + "'");
}

std::optional<double> NodeResult::best_score() const {
  std::optional<double> best;
  for (const Attempt& a : attempts) {
    if (a.score && (!best || *a.score > *best)) best = a.score;
  }
  return best;
}

std::mutex& SerialGates::gate(const std::string& model_id) {
  std::lock_guard lock(mu_);
  auto& slot = gates_[model_id];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

namespace {

std::vector<int> node_images(const planning::PlanNode& node, const std::vector<ImageRef>& images) {
  std::vector<int> out;
  if (node.proposal.image_refs.empty()) {
    for (int i = 0; i < static_cast<int>(images.size()); ++i) out.push_back(i);
    return out;
  }
  for (int i : node.proposal.image_refs) {
    if (i < 0 || i >= static_cast<int>(images.size())) {
      throw Error(ErrorKind::InvalidRequest, "proposal refers to image " + std::to_string(i));
    }
    if (std::find(out.begin(), out.end(), i) == out.end()) out.push_back(i);
  }
  return out;
}

std::vector<BBox> upstream_regions(const NodeResult& up, int image_index) {
  std::vector<BBox> boxes;
  for (const ImageOutput& io : up.outputs) {
    if (io.image_index != image_index) continue;
    for (const Detection& d : io.output.detections) boxes.push_back(d.box);
    for (const InstanceMask& m : io.output.masks) {
      if (!m.mask.empty()) boxes.push_back(mask_bounds(m.mask));
    }
  }
  return boxes;
}

std::vector<registry::ModelDescriptor> model_chain(const planning::PlanNode& node, const registry::Registry& reg) {
  std::vector<registry::ModelDescriptor> chain = reg.fallback_chain(node.proposal.op);
  if (node.model_id) {
    auto it = std::find_if(chain.begin(), chain.end(),
                           [&](const registry::ModelDescriptor& m) { return m.id == *node.model_id; });
    if (it != chain.end()) std::rotate(chain.begin(), it, it + 1);
  }
  return chain;
}

}  // namespace

NodeResult run_node(const planning::PlanNode& node, const std::vector<ImageRef>& images,
                    const std::vector<const NodeResult*>& upstream, const RunContext& ctx, SerialGates& gates) {
  NodeResult result;
  result.node_id = node.node_id;
  result.status = NodeStatus::FailedExecution;

  std::vector<registry::ModelDescriptor> chain;
  try {
    chain = model_chain(node, *ctx.registry);
  } catch (const Error& e) {
    result.detail = e.what();
    return result;
  }
  const std::vector<int> targets = node_images(node, images);
  const bool region_source = !node.whole_image && upstream.size() == 1 &&
                             (node.proposal.op == OperationKind::Segment || node.proposal.op == OperationKind::Edit);
  const double tau = ctx.config.verify_threshold;

  std::optional<double> best;
  for (const registry::ModelDescriptor& model : chain) {
    for (int round = 0; round <= ctx.config.retry_budget; ++round) {
      Attempt attempt;
      attempt.model_id = model.id;
      result.model_id = model.id;
      std::vector<ImageOutput> outputs;
      bool exec_failed = false;
      bool verify_failed = false;
      for (int idx : targets) {
        exec::ExecInput input;
        input.op = node.proposal.op;
        input.target = node.proposal.target;
        input.instruction = node.proposal.instruction;
        input.image = images[static_cast<std::size_t>(idx)];
        if (region_source && model.accepts_regions) input.regions = upstream_regions(*upstream.front(), idx);

        ImageOutput io;
        io.image_index = idx;
        try {
          if (model.concurrency_class == registry::ConcurrencyClass::Serial) {
            std::lock_guard gate(gates.gate(model.id));
            io.output = exec::execute(model, input, *ctx.resolver);
          } else {
            io.output = exec::execute(model, input, *ctx.resolver);
          }
        } catch (const Error& e) {
          attempt.outcome = AttemptOutcome::ExecutionError;
          attempt.detail = e.what();
          exec_failed = true;
          break;
        }
        try {
          const auto ground = ctx.resolver->scenes()->ground_for(input.image);
          io.verification = ctx.verifier->verify(io.output, input, ground.get());
        } catch (const Error& e) {
          attempt.outcome = AttemptOutcome::VerifierError;
          attempt.detail = e.what();
          verify_failed = true;
          break;
        }
        attempt.score = attempt.score ? std::min(*attempt.score, io.verification.score) : io.verification.score;
        outputs.push_back(std::move(io));
      }
      if (exec_failed) {
        result.attempts.push_back(std::move(attempt));
        break;  // next model
      }
      if (!verify_failed) {
        const double score = attempt.score.value_or(1.0);
        attempt.outcome = score >= tau ? AttemptOutcome::Accepted : AttemptOutcome::BelowThreshold;
        if (!best || score > *best) {
          best = score;
          result.outputs = std::move(outputs);
        }
      }
      const bool accepted = attempt.outcome == AttemptOutcome::Accepted;
      result.attempts.push_back(std::move(attempt));
      if (accepted) {
        result.status = NodeStatus::Succeeded;
        return result;
      }
    }
  }
  if (best) result.status = NodeStatus::FailedVerification;
  return result;
}

namespace {

class Scheduler {
 public:
  Scheduler(const planning::PlanDAG& dag, const RunContext& ctx, SerialGates& gates)
      : dag_(dag), ctx_(ctx), gates_(gates), results_(dag.nodes.size()), remaining_deps_(dag.nodes.size()),
        dependents_(dag.nodes.size()) {
    for (std::size_t i = 0; i < dag.nodes.size(); ++i) {
      if (dag.nodes[i].node_id != static_cast<int>(i)) {
        throw Error(ErrorKind::InvalidProposalSet, "plan node ids must match their position");
      }
    }
    planning::topological_order(dag);  // rejects cycles and dangling edges
    for (const planning::PlanNode& n : dag.nodes) {
      remaining_deps_[static_cast<std::size_t>(n.node_id)] = n.depends_on.size();
      for (int d : n.depends_on) dependents_[static_cast<std::size_t>(d)].push_back(n.node_id);
      if (n.depends_on.empty()) ready_.push_back(n.node_id);
    }
  }

  std::vector<NodeResult> run() {
    const std::size_t n = dag_.nodes.size();
    if (n == 0) return {};
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(ctx_.config.max_parallel), n);
    {
      std::vector<std::jthread> pool;
      pool.reserve(workers);
      for (std::size_t i = 0; i < workers; ++i) pool.emplace_back([this] { work(); });
    }
    if (failure_) std::rethrow_exception(failure_);
    std::vector<NodeResult> out;
    out.reserve(n);
    for (auto& r : results_) out.push_back(std::move(*r));
    return out;
  }

 private:
  void work() {
    std::unique_lock lock(mu_);
    while (true) {
      cv_.wait(lock, [&] { return !ready_.empty() || done_ == dag_.nodes.size() || failure_; });
      if (done_ == dag_.nodes.size() || failure_) return;
      const int id = ready_.front();
      ready_.pop_front();
      const planning::PlanNode& node = dag_.nodes[static_cast<std::size_t>(id)];

      std::vector<const NodeResult*> upstream;
      bool blocked = false;
      for (int d : node.depends_on) {
        const NodeResult& r = *results_[static_cast<std::size_t>(d)];
        blocked = blocked || r.status != NodeStatus::Succeeded;
        upstream.push_back(&r);
      }

      NodeResult result;
      if (blocked) {
        result.node_id = id;
        result.status = NodeStatus::Skipped;
        result.detail = "a dependency did not succeed";
      } else {
        lock.unlock();
        try {
          if (ctx_.observer) ctx_.observer->node_started(id);
          result = run_node(node, dag_.images, upstream, ctx_, gates_);
        } catch (...) {
          lock.lock();
          failure_ = std::current_exception();
          cv_.notify_all();
          return;
        }
        lock.lock();
      }
      if (ctx_.observer) {
        lock.unlock();
        ctx_.observer->node_finished(result);
        lock.lock();
      }
      results_[static_cast<std::size_t>(id)] = std::move(result);
      ++done_;
      for (int next : dependents_[static_cast<std::size_t>(id)]) {
        if (--remaining_deps_[static_cast<std::size_t>(next)] == 0) ready_.push_back(next);
      }
      cv_.notify_all();
    }
  }

  const planning::PlanDAG& dag_;
  const RunContext& ctx_;
  SerialGates& gates_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::vector<std::optional<NodeResult>> results_;
  std::vector<std::size_t> remaining_deps_;
  std::vector<std::vector<int>> dependents_;
  std::deque<int> ready_;
  std::size_t done_ = 0;
  std::exception_ptr failure_;
};

}  // namespace

std::vector<NodeResult> schedule(const planning::PlanDAG& dag, const RunContext& ctx, SerialGates& gates) {
  validate_config(ctx.config);
  return Scheduler(dag, ctx, gates).run();
}

std::vector<NodeResult> schedule(const planning::PlanDAG& dag, const RunContext& ctx) {
  SerialGates gates;
  return schedule(dag, ctx, gates);
}

}  // namespace visionflow::engine

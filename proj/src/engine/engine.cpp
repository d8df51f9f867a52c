#include "visionflow/engine/engine.hpp"

#include <chrono>

#include "visionflow/core/image_io.hpp"
#include "visionflow/dsl/proposals.hpp"
#include "visionflow/engine/run_id.hpp"
#include "visionflow/error.hpp"
#include "visionflow/planning/dag.hpp"
#include "visionflow/planning/scoring.hpp"
#include "visionflow/prompting/rule_planner.hpp"

namespace visionflow::engine {

namespace {

std::int64_t now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::set<OperationKind> supported_ops(const registry::Registry& reg) {
  std::set<OperationKind> ops;
  for (const registry::ModelDescriptor& m : reg.list()) ops.insert(m.capabilities.begin(), m.capabilities.end());
  return ops;
}

}  // namespace

Engine::Engine(EngineConfig config, EngineParts parts)
    : config_(std::move(config)), parts_(std::move(parts)), store_(config_.run_dir) {
  validate_config(config_);
  prompting::validate_prompt_config(parts_.prompt);
  if (!parts_.registry) parts_.registry = std::make_shared<registry::Registry>(registry::default_registry());
  if (!parts_.scenes) parts_.scenes = std::make_shared<exec::SceneCatalog>();
  if (!parts_.resolver) {
    parts_.resolver = std::make_shared<exec::ExecutorResolver>(parts_.scenes, config_.executor_deadline);
  }
  if (!parts_.verifier) {
    parts_.verifier = std::make_shared<exec::DefaultVerifier>(config_.verifier_endpoint, config_.executor_deadline);
  }
  store_.recover();
}

std::unique_ptr<Engine> Engine::from_config(const AppConfig& cfg) {
  EngineParts parts;
  parts.prompt = cfg.prompt;
  for (const auto& desc : cfg.backends) parts.backends.push_back(prompting::make_backend(desc));
  if (cfg.registry_path) {
    parts.registry = std::make_shared<registry::Registry>(registry::load_registry(*cfg.registry_path));
  }
  return std::make_unique<Engine>(cfg.engine, std::move(parts));
}

PlanOutcome Engine::plan(const std::string& request, double lambda) const {
  if (normalize_text(request).empty()) throw Error(ErrorKind::EmptyInput, "request is empty");
  PlanOutcome out;
  out.prompt = prompting::build_prompt(parts_.prompt, request);
  const std::set<OperationKind> supported = supported_ops(*parts_.registry);

  for (const auto& backend : parts_.backends) {
    std::vector<std::string> raw;
    try {
      raw = prompting::generate_candidates(*backend, out.prompt);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::BackendUnavailable || e.kind() == ErrorKind::BackendMalformed) continue;
      throw;
    }
    std::vector<ProposalSet> parsed;
    for (const std::string& text : raw) {
      out.candidates.push_back(text);
      auto outcome = dsl::try_parse_proposals(text);
      if (outcome.set && dsl::validate_set(*outcome.set).empty()) parsed.push_back(std::move(*outcome.set));
    }
    if (parsed.empty()) continue;
    const planning::Selection sel = planning::select_best(request, parsed, lambda, supported);
    out.planner_backend = backend->descriptor().id;
    out.selected = sel.set;
    out.score = sel.score;
    return out;
  }

  ProposalSet fallback;
  try {
    fallback = prompting::rule_based_plan(request);
  } catch (const Error& e) {
    throw Error(ErrorKind::PlanningFailed, e.detail());
  }
  out.fell_back = !parts_.backends.empty();
  out.planner_backend = "rule-based";
  out.candidates.push_back(dsl::serialize_proposals(fallback));
  out.score = planning::make_score(planning::congruence(request, fallback),
                                   planning::regularizer(fallback, supported), lambda);
  out.selected = std::move(fallback);
  return out;
}

RunOutcome Engine::run_request(const std::string& request, const std::vector<ImageRef>& images) {
  return run_request(request, images, config_);
}

RunOutcome Engine::run_request(const std::string& request, const std::vector<ImageRef>& images,
                               const EngineConfig& cfg) {
  validate_config(cfg);
  if (images.empty()) throw Error(ErrorKind::InvalidRequest, "at least one image is required");
  RunRecord rec;
  rec.run_id = new_run_id();
  rec.started_at_ms = now_ms();
  rec.request = request;
  rec.config = cfg;

  PlanOutcome planned = plan(request, cfg.lambda);
  rec.prompt = planned.prompt;
  rec.planner_backend = planned.planner_backend;
  rec.candidates = planned.candidates;
  rec.selected = planned.selected;
  rec.score = planned.score;

  const auto snapshot = std::make_shared<const registry::Registry>(*parts_.registry);
  planning::PlanDAG dag = planning::build_dag(rec.selected, images, request);
  for (planning::PlanNode& node : dag.nodes) {
    try {
      node.model_id = snapshot->select_model(node.proposal.op).id;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoCapableModel) throw;
    }
  }

  RunContext ctx{cfg, snapshot, parts_.resolver, parts_.verifier, observer_};
  std::vector<NodeResult> results = schedule(dag, ctx, gates_);
  Integration integ = integrate(results, dag, *parts_.scenes, rec.planner_backend);
  if (planned.fell_back) integ.summary["notes"].push_back("planner backends failed; used the rule-based planner");

  rec.dag = std::move(dag);
  rec.node_results = std::move(results);
  for (const Composite& c : integ.composites) rec.artifacts.push_back(c.image);
  rec.summary = std::move(integ.summary);
  rec.finished_at_ms = now_ms();

  if (cfg.run_dir == config_.run_dir) {
    store_.persist(rec, integ.composites);
  } else {
    RunStore(cfg.run_dir).persist(rec, integ.composites);
  }
  return {std::move(rec), std::move(integ.composites)};
}

std::vector<Detection> Engine::label_objects(const std::string& object, const ImageRef& image) const {
  exec::ExecInput input;
  input.op = OperationKind::Locate;
  input.target = Label::normalize(object);
  input.image = image;
  std::optional<Error> last;
  for (const registry::ModelDescriptor& model : parts_.registry->fallback_chain(OperationKind::Locate)) {
    try {
      return exec::execute(model, input, *parts_.resolver).detections;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::RemoteUnavailable && e.kind() != ErrorKind::RemoteMalformed &&
          e.kind() != ErrorKind::CapabilityMismatch) {
        throw;
      }
      last = e;
    }
  }
  throw *last;
}

ImageRef Engine::image_from_path(const std::string& path) const { return probe_image(path); }

}  // namespace visionflow::engine

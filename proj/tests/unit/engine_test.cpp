#include <gtest/gtest.h>

#include <unistd.h>

#include <filesystem>
#include <random>
#include <set>

#include "fakes.hpp"
#include "scenes.hpp"
#include "visionflow/core/kernels.hpp"
#include "visionflow/core/palette.hpp"
#include "visionflow/core/raster.hpp"
#include "visionflow/dsl/proposals.hpp"
#include "visionflow/engine/engine.hpp"
#include "visionflow/engine/integrate.hpp"
#include "visionflow/engine/run_id.hpp"
#include "visionflow/engine/run_store.hpp"
#include "visionflow/engine/scheduler.hpp"
#include "visionflow/planning/dag.hpp"
#include "visionflow/prompting/backend.hpp"

using namespace visionflow;
using namespace visionflow::engine;
namespace fs = std::filesystem;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error";
  return ErrorKind::InvalidRequest;
}

registry::ModelDescriptor model(const std::string& id, std::set<OperationKind> ops, double quality,
                                registry::ConcurrencyClass cc = registry::ConcurrencyClass::Concurrent) {
  return {id, std::move(ops), quality, 0.1, false, cc, std::nullopt};
}

exec::ExecOutput caption_output() {
  exec::ExecOutput o;
  o.caption = "ok";
  return o;
}

// Registry, resolver and verifier assembled by hand so tests control every
// model and every score.
struct Harness {
  std::shared_ptr<registry::Registry> reg = std::make_shared<registry::Registry>();
  std::shared_ptr<exec::SceneCatalog> scenes = std::make_shared<exec::SceneCatalog>();
  std::shared_ptr<exec::ExecutorResolver> resolver = std::make_shared<exec::ExecutorResolver>(scenes);
  std::shared_ptr<exec::Verifier> verifier;
  EngineConfig cfg;

  void add(const registry::ModelDescriptor& d, std::shared_ptr<exec::Executor> ex) {
    reg->register_model(d);
    resolver->bind(d.id, std::move(ex));
  }

  RunContext ctx(ScheduleObserver* observer = nullptr) const { return {cfg, reg, resolver, verifier, observer}; }
};

planning::PlanNode node(int id, OperationKind op, const std::string& target, std::vector<int> deps = {}) {
  planning::PlanNode n;
  n.node_id = id;
  n.proposal = make_proposal(op, target);
  n.depends_on = std::move(deps);
  return n;
}

ImageRef raster_image() {
  ImageRef r;
  r.id = "img";
  r.uri = "img.ppm";
  r.width = 4;
  r.height = 4;
  r.kind = ImageSourceKind::Raster;
  return r;
}

class ThrowOnceVerifier final : public exec::Verifier {
 public:
  exec::VerifierScoreRecord verify(const exec::ExecOutput&, const exec::ExecInput&, const SceneSpec*) override {
    if (calls_++ == 0) throw Error(ErrorKind::VerifierUnavailable, "flaky");
    return {1.0, "test", ""};
  }

 private:
  int calls_ = 0;
};

fs::path temp_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("visionflow_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(RunId, FormatAndOrdering) {
  EXPECT_EQ(format_run_id(0, 0, 0), std::string(26, '0'));
  EXPECT_EQ(format_run_id(1469918176385, 0, 0).substr(0, 10), "01ARYZ6S41");
  EXPECT_EQ(format_run_id(0, 0, 1), std::string(25, '0') + "1");
  EXPECT_EQ(format_run_id(0, 0, 31), std::string(25, '0') + "Z");
  EXPECT_TRUE(is_run_id(format_run_id(1469918176385, 0xffff, ~0ULL)));
  EXPECT_FALSE(is_run_id("01ARYZ6S41"));
  EXPECT_FALSE(is_run_id(std::string(25, '0') + "U"));
  EXPECT_FALSE(is_run_id("8" + std::string(25, '0')));
  std::string prev;
  for (int i = 0; i < 2000; ++i) {
    const std::string id = new_run_id();
    ASSERT_TRUE(is_run_id(id)) << id;
    ASSERT_LT(prev, id);
    prev = id;
  }
}

TEST(RunNode, LowScoreThenAcceptedUsesTwoAttempts) {
  Harness h;
  auto ex = std::make_shared<vf_test::ScriptedExecutor>(caption_output());
  h.add(model("cap", {OperationKind::Caption}, 0.5), ex);
  h.verifier = std::make_shared<vf_test::ScriptedVerifier>(std::vector<double>{0.3, 0.9});
  SerialGates gates;
  const NodeResult r = run_node(node(0, OperationKind::Caption, "image"), {raster_image()}, {}, h.ctx(), gates);
  EXPECT_EQ(r.status, NodeStatus::Succeeded);
  ASSERT_EQ(r.attempts.size(), 2u);
  EXPECT_EQ(r.attempts[0].outcome, AttemptOutcome::BelowThreshold);
  EXPECT_DOUBLE_EQ(*r.attempts[0].score, 0.3);
  EXPECT_EQ(r.attempts[1].outcome, AttemptOutcome::Accepted);
  EXPECT_EQ(ex->calls(), 2);
  EXPECT_EQ(r.best_score(), 0.9);
}

TEST(RunNode, PersistentLowScoreExhaustsEveryModel) {
  for (int budget : {0, 1, 2, 4}) {
    Harness h;
    h.cfg.retry_budget = budget;
    h.add(model("a", {OperationKind::Caption}, 0.9), std::make_shared<vf_test::ScriptedExecutor>(caption_output()));
    h.add(model("b", {OperationKind::Caption}, 0.5), std::make_shared<vf_test::ScriptedExecutor>(caption_output()));
    h.add(model("c", {OperationKind::Caption}, 0.1), std::make_shared<vf_test::ScriptedExecutor>(caption_output()));
    h.verifier = std::make_shared<vf_test::ScriptedVerifier>(std::vector<double>{0.1});
    SerialGates gates;
    const NodeResult r = run_node(node(0, OperationKind::Caption, "image"), {raster_image()}, {}, h.ctx(), gates);
    EXPECT_EQ(r.status, NodeStatus::FailedVerification);
    ASSERT_EQ(r.attempts.size(), static_cast<std::size_t>(3 * (1 + budget)));
    EXPECT_EQ(r.attempts.front().model_id, "a");
    EXPECT_EQ(r.attempts.back().model_id, "c");
    EXPECT_FALSE(r.outputs.empty());
  }
}

TEST(RunNode, ExecutionErrorMovesToTheNextModel) {
  Harness h;
  auto broken = std::make_shared<vf_test::ScriptedExecutor>(caption_output(), 100);
  auto fine = std::make_shared<vf_test::ScriptedExecutor>(caption_output());
  h.add(model("broken", {OperationKind::Caption}, 0.9), broken);
  h.add(model("fine", {OperationKind::Caption}, 0.5), fine);
  h.verifier = std::make_shared<vf_test::ScriptedVerifier>(std::vector<double>{1.0});
  SerialGates gates;
  const NodeResult r = run_node(node(0, OperationKind::Caption, "image"), {raster_image()}, {}, h.ctx(), gates);
  EXPECT_EQ(r.status, NodeStatus::Succeeded);
  ASSERT_EQ(r.attempts.size(), 2u);
  EXPECT_EQ(r.attempts[0].outcome, AttemptOutcome::ExecutionError);
  EXPECT_FALSE(r.attempts[0].score);
  EXPECT_EQ(r.model_id, "fine");
  EXPECT_EQ(broken->calls(), 1);
}

TEST(RunNode, AllModelsFailingToExecute) {
  Harness h;
  h.add(model("x", {OperationKind::Caption}, 0.9), std::make_shared<vf_test::ScriptedExecutor>(caption_output(), 100));
  h.add(model("y", {OperationKind::Caption}, 0.5), std::make_shared<vf_test::ScriptedExecutor>(caption_output(), 100));
  h.verifier = std::make_shared<vf_test::ScriptedVerifier>(std::vector<double>{1.0});
  SerialGates gates;
  const NodeResult r = run_node(node(0, OperationKind::Caption, "image"), {raster_image()}, {}, h.ctx(), gates);
  EXPECT_EQ(r.status, NodeStatus::FailedExecution);
  EXPECT_EQ(r.attempts.size(), 2u);
  EXPECT_FALSE(r.best_score());
}

TEST(RunNode, BoundModelGoesFirstAndMissingModelsFail) {
  Harness h;
  auto low = std::make_shared<vf_test::ScriptedExecutor>(caption_output());
  h.add(model("high", {OperationKind::Caption}, 0.9), std::make_shared<vf_test::ScriptedExecutor>(caption_output()));
  h.add(model("low", {OperationKind::Caption}, 0.2), low);
  h.verifier = std::make_shared<vf_test::ScriptedVerifier>(std::vector<double>{1.0});
  SerialGates gates;
  planning::PlanNode n = node(0, OperationKind::Caption, "image");
  n.model_id = "low";
  const NodeResult r = run_node(n, {raster_image()}, {}, h.ctx(), gates);
  EXPECT_EQ(r.model_id, "low");
  EXPECT_EQ(low->calls(), 1);

  const NodeResult none = run_node(node(0, OperationKind::Locate, "dogs"), {raster_image()}, {}, h.ctx(), gates);
  EXPECT_EQ(none.status, NodeStatus::FailedExecution);
  EXPECT_TRUE(none.attempts.empty());
  EXPECT_NE(none.detail.find("NoCapableModel"), std::string::npos);
}

TEST(RunNode, VerifierErrorIsRetried) {
  Harness h;
  h.add(model("cap", {OperationKind::Caption}, 0.5), std::make_shared<vf_test::ScriptedExecutor>(caption_output()));
  h.verifier = std::make_shared<ThrowOnceVerifier>();
  SerialGates gates;
  const NodeResult r = run_node(node(0, OperationKind::Caption, "image"), {raster_image()}, {}, h.ctx(), gates);
  ASSERT_EQ(r.attempts.size(), 2u);
  EXPECT_EQ(r.attempts[0].outcome, AttemptOutcome::VerifierError);
  EXPECT_EQ(r.status, NodeStatus::Succeeded);
}

TEST(RunNode, MultiImageScoreIsTheMinimum) {
  Harness h;
  h.add(model("cap", {OperationKind::Caption}, 0.5), std::make_shared<vf_test::ScriptedExecutor>(caption_output()));
  h.cfg.retry_budget = 0;
  h.verifier = std::make_shared<vf_test::ScriptedVerifier>(std::vector<double>{0.9, 0.6});
  SerialGates gates;
  const NodeResult r =
      run_node(node(0, OperationKind::Caption, "image"), {raster_image(), raster_image()}, {}, h.ctx(), gates);
  ASSERT_EQ(r.attempts.size(), 1u);
  EXPECT_DOUBLE_EQ(*r.attempts[0].score, 0.6);
  EXPECT_EQ(r.status, NodeStatus::FailedVerification);
  EXPECT_EQ(r.outputs.size(), 2u);
}

TEST(RunNode, SegmentReceivesUpstreamBoxes) {
  Harness h;
  h.reg = std::make_shared<registry::Registry>(registry::default_registry());
  h.verifier = std::make_shared<exec::MockVerifier>();
  const ImageRef img = vf_test::add_scene(*h.scenes, "dl", vf_test::dogs_and_lemon_scene());
  const planning::PlanDAG dag = planning::build_dag(dsl::parse_proposals("\"locate\" dogs; \"segment\" dogs;"), {img});
  const auto results = schedule(dag, h.ctx());
  ASSERT_EQ(results.size(), 2u);
  EXPECT_EQ(results[0].status, NodeStatus::Succeeded);
  EXPECT_EQ(results[1].status, NodeStatus::Succeeded);
  ASSERT_EQ(results[1].outputs.size(), 1u);
  EXPECT_EQ(results[1].outputs[0].output.masks.size(), 2u);
  EXPECT_DOUBLE_EQ(*results[1].best_score(), 1.0);
}

TEST(Scheduler, RandomDagsRespectDependenciesAndParallelism) {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    Harness h;
    h.cfg.max_parallel = std::uniform_int_distribution<int>(1, 4)(rng);
    h.cfg.retry_budget = 0;
    auto probe = std::make_shared<vf_test::ConcurrencyProbe>();
    h.add(model("probe", {OperationKind::Caption}, 0.5), probe);
    h.add(model("broken", {OperationKind::Generate}, 0.5),
          std::make_shared<vf_test::ScriptedExecutor>(caption_output(), 1 << 20));
    h.verifier = std::make_shared<vf_test::ScriptedVerifier>(std::vector<double>{1.0});

    planning::PlanDAG dag;
    dag.images = {raster_image()};
    const int n = std::uniform_int_distribution<int>(1, 12)(rng);
    for (int i = 0; i < n; ++i) {
      std::vector<int> deps;
      for (int j = 0; j < i; ++j) {
        if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) deps.push_back(j);
      }
      const bool fails = std::uniform_int_distribution<int>(0, 5)(rng) == 0;
      dag.nodes.push_back(node(i, fails ? OperationKind::Generate : OperationKind::Caption, "x", deps));
    }
    vf_test::EventLog log;
    const auto results = schedule(dag, h.ctx(&log));
    ASSERT_EQ(results.size(), static_cast<std::size_t>(n));
    EXPECT_LE(probe->peak(), h.cfg.max_parallel);

    std::map<int, std::size_t> finished_at;
    std::map<int, std::size_t> started_at;
    const auto events = log.events();
    for (std::size_t k = 0; k < events.size(); ++k) {
      auto& slot = events[k].start ? started_at : finished_at;
      ASSERT_FALSE(slot.contains(events[k].node_id));
      slot[events[k].node_id] = k;
    }
    EXPECT_EQ(finished_at.size(), static_cast<std::size_t>(n));
    for (const planning::PlanNode& nd : dag.nodes) {
      const NodeResult& r = results[static_cast<std::size_t>(nd.node_id)];
      EXPECT_EQ(r.node_id, nd.node_id);
      bool deps_ok = true;
      for (int d : nd.depends_on) {
        deps_ok = deps_ok && results[static_cast<std::size_t>(d)].status == NodeStatus::Succeeded;
        EXPECT_LT(finished_at[d], started_at.contains(nd.node_id) ? started_at[nd.node_id] : finished_at[nd.node_id]);
      }
      if (!deps_ok) {
        EXPECT_EQ(r.status, NodeStatus::Skipped);
        EXPECT_FALSE(started_at.contains(nd.node_id));
      } else {
        EXPECT_EQ(r.status, nd.proposal.op == OperationKind::Generate ? NodeStatus::FailedExecution
                                                                      : NodeStatus::Succeeded);
      }
    }
  }
}

TEST(Scheduler, SerialModelsNeverOverlap) {
  for (auto cc : {registry::ConcurrencyClass::Serial, registry::ConcurrencyClass::Concurrent}) {
    Harness h;
    h.cfg.max_parallel = 4;
    auto probe = std::make_shared<vf_test::ConcurrencyProbe>(std::chrono::milliseconds(15));
    h.add(model("probe", {OperationKind::Caption}, 0.5, cc), probe);
    h.verifier = std::make_shared<vf_test::ScriptedVerifier>(std::vector<double>{1.0});
    planning::PlanDAG dag;
    dag.images = {raster_image()};
    for (int i = 0; i < 8; ++i) dag.nodes.push_back(node(i, OperationKind::Caption, "x"));
    schedule(dag, h.ctx());
    if (cc == registry::ConcurrencyClass::Serial) {
      EXPECT_EQ(probe->peak(), 1);
    } else {
      EXPECT_GT(probe->peak(), 1);
    }
  }
}

TEST(Scheduler, RejectsMalformedGraphs) {
  Harness h;
  h.verifier = std::make_shared<vf_test::ScriptedVerifier>(std::vector<double>{1.0});
  planning::PlanDAG misnumbered;
  misnumbered.nodes.push_back(node(1, OperationKind::Caption, "x"));
  EXPECT_EQ(kind_of([&] { schedule(misnumbered, h.ctx()); }), ErrorKind::InvalidProposalSet);
  planning::PlanDAG forward;
  forward.nodes.push_back(node(0, OperationKind::Caption, "x", {1}));
  forward.nodes.push_back(node(1, OperationKind::Caption, "x", {0}));
  EXPECT_EQ(kind_of([&] { schedule(forward, h.ctx()); }), ErrorKind::InvalidProposalSet);
  h.cfg.max_parallel = 0;
  EXPECT_EQ(kind_of([&] { schedule(planning::PlanDAG{}, h.ctx()); }), ErrorKind::InvalidConfig);
}

TEST(Integrate, InstancesGetDistinctColoursAcrossImages) {
  Harness h;
  h.reg = std::make_shared<registry::Registry>(registry::default_registry());
  h.verifier = std::make_shared<exec::MockVerifier>();
  h.cfg.verify_threshold = 0.0;
  const SceneSpec s0 = vf_test::dogs_and_lemon_scene();
  const SceneSpec s1 = vf_test::lemons_and_dog_scene();
  const std::vector<ImageRef> images = {vf_test::add_scene(*h.scenes, "a", s0), vf_test::add_scene(*h.scenes, "b", s1)};
  const planning::PlanDAG dag = planning::build_dag(
      dsl::parse_proposals(
          "\"locate\" dogs; \"segment\" dogs; \"locate\" lemons; \"segment\" lemons;"),
      images);
  std::vector<NodeResult> results = schedule(dag, h.ctx());
  const Integration integ = integrate(results, dag, *h.scenes, "rule-based");
  ASSERT_EQ(integ.composites.size(), 2u);
  EXPECT_EQ(integ.composites[1].image.id, "composite-1.ppm");
  EXPECT_EQ(integ.summary["targets"]["dogs"]["masks"], 3);
  EXPECT_EQ(integ.summary["targets"]["lemons"]["masks"], 3);
  EXPECT_EQ(integ.summary["targets"]["lemons"]["detections"], 3);

  std::set<std::tuple<int, int, int>> colours;
  std::map<std::string, std::set<int>> ids;
  for (const NodeResult& r : results) {
    for (const ImageOutput& io : r.outputs) {
      const SceneSpec& scene = io.image_index == 0 ? s0 : s1;
      const RgbImage base = render_scene(scene);
      const RgbImage& comp = integ.composites[static_cast<std::size_t>(io.image_index)].raster;
      for (const InstanceMask& m : io.output.masks) {
        colours.insert({m.color.r, m.color.g, m.color.b});
        EXPECT_TRUE(ids[m.label.text()].insert(m.instance_id).second);
        const Bitmap bm = rle_decode(m.mask);
        for (int y = 0; y < bm.height; ++y) {
          for (int x = 0; x < bm.width; ++x) {
            if (!bm.at(x, y)) continue;
            const Rgb b = base.at(x, y);
            const Rgb want{kernels::blend_channel(b.r, m.color.r), kernels::blend_channel(b.g, m.color.g),
                           kernels::blend_channel(b.b, m.color.b)};
            ASSERT_EQ(comp.at(x, y), want);
          }
        }
      }
    }
  }
  EXPECT_EQ(colours.size(), 6u);
  EXPECT_EQ(ids["dogs"], (std::set<int>{1, 2, 3}));
  EXPECT_EQ(ids["lemons"], (std::set<int>{1, 2, 3}));
}

TEST(Integrate, DetectionsWithoutMasksAreOutlined) {
  Harness h;
  h.reg = std::make_shared<registry::Registry>(registry::default_registry());
  h.verifier = std::make_shared<exec::MockVerifier>();
  h.cfg.verify_threshold = 0.0;
  const SceneSpec s = vf_test::make_scene(20, 20, {vf_test::shape("box", ShapeKind::Rect, 5, 5, 6, 4)});
  const ImageRef img = vf_test::add_scene(*h.scenes, "box", s);
  const planning::PlanDAG dag = planning::build_dag(dsl::parse_proposals("\"locate\" box;"), {img});
  std::vector<NodeResult> results = schedule(dag, h.ctx());
  const RgbImage comp = composite(render_scene(s), results, 0);
  const Rgb c = palette_color(0);
  EXPECT_EQ(comp.at(5, 5), c);
  EXPECT_EQ(comp.at(10, 8), c);
  EXPECT_EQ(comp.at(7, 5), c);
  EXPECT_EQ(comp.at(7, 6), render_scene(s).at(7, 6));
  EXPECT_EQ(comp.at(0, 0), render_scene(s).at(0, 0));
}

TEST(Integrate, BaseRasterErrors) {
  exec::SceneCatalog scenes;
  ImageRef missing = raster_image();
  missing.uri = "/nonexistent/image.ppm";
  EXPECT_EQ(kind_of([&] { base_raster(missing, scenes); }), ErrorKind::CompositingFailure);
}

TEST(RunStore, CrashAtAnyStageLeavesNoPartialRun) {
  const fs::path root = temp_dir("store_crash");
  Harness h;
  RunRecord rec;
  rec.request = "find dogs";
  rec.summary = nlohmann::ordered_json::object();
  for (const std::string stage : {"files", "publish", "index"}) {
    RunStore store(root);
    rec.run_id = new_run_id();
    store.set_fault_hook([&](std::string_view s) {
      if (s == stage) throw std::runtime_error("crash");
    });
    EXPECT_THROW(store.persist(rec, {}), std::runtime_error);
    RunStore reopened(root);
    reopened.recover();
    if (stage == "index") {
      EXPECT_EQ(reopened.load(rec.run_id), rec);
      EXPECT_EQ(reopened.index().back(), rec.run_id);
    } else {
      EXPECT_FALSE(reopened.contains(rec.run_id));
      EXPECT_EQ(kind_of([&] { reopened.load(rec.run_id); }), ErrorKind::RunNotFound);
    }
    for (const auto& entry : fs::directory_iterator(root)) {
      EXPECT_NE(entry.path().filename().string().rfind(".tmp-", 0), 0u) << entry.path();
    }
  }
  fs::remove_all(root);
}

TEST(RunStore, ArtifactsAndUnknownNames) {
  const fs::path root = temp_dir("store_artifacts");
  RunStore store(root);
  EXPECT_EQ(store.recover(), 0u);
  EXPECT_TRUE(store.index().empty());
  RunRecord rec;
  rec.run_id = new_run_id();
  Composite c;
  c.image.id = c.image.uri = composite_name(0);
  c.image.kind = ImageSourceKind::Raster;
  c.raster = RgbImage(2, 1, {1, 2, 3});
  rec.artifacts = {c.image};
  store.persist(rec, {c});
  EXPECT_EQ(store.load_artifact(rec.run_id, "composite-0.ppm"), std::string("P6\n2 1\n255\n\x01\x02\x03\x01\x02\x03", 17));
  EXPECT_EQ(kind_of([&] { store.load_artifact(rec.run_id, "../index.json"); }), ErrorKind::RunNotFound);
  EXPECT_EQ(kind_of([&] { store.load("not-a-run"); }), ErrorKind::RunNotFound);
  EXPECT_EQ(kind_of([&] { store.persist(rec, {c}); }), ErrorKind::StorageFailure);
  fs::remove_all(root);
}

TEST(Engine, EndToEndOnTwoScenes) {
  const fs::path root = temp_dir("engine_e2e");
  EngineConfig cfg;
  cfg.run_dir = root;
  Engine engine(cfg, {});
  const ImageRef a = vf_test::add_scene(engine.scenes(), "a", vf_test::dogs_and_lemon_scene());
  const ImageRef b = vf_test::add_scene(engine.scenes(), "b", vf_test::lemons_and_dog_scene());
  const RunOutcome out = engine.run_request("segment dogs and lemons", {a, b});
  EXPECT_EQ(out.record.planner_backend, "rule-based");
  EXPECT_EQ(dsl::serialize_proposals(out.record.selected),
            "\"locate\" dogs; \"segment\" dogs; \"locate\" lemons; \"segment\" lemons;");
  for (const NodeResult& r : out.record.node_results) EXPECT_EQ(r.status, NodeStatus::Succeeded) << r.node_id;
  EXPECT_EQ(out.composites.size(), 2u);
  EXPECT_EQ(engine.store().load(out.record.run_id), out.record);
  EXPECT_EQ(engine.store().index(), std::vector<std::string>{out.record.run_id});

  const auto dogs = engine.label_objects("Dogs", a);
  ASSERT_EQ(dogs.size(), 2u);
  EXPECT_EQ(dogs[1].box, (BBox{30, 6, 16, 12}));

  EXPECT_EQ(kind_of([&] { engine.run_request("find dogs", {}); }), ErrorKind::InvalidRequest);
  EXPECT_EQ(kind_of([&] { engine.plan("   "); }), ErrorKind::EmptyInput);
  fs::remove_all(root);
}

TEST(Engine, PlannerBackendsAreTriedInOrderThenFallBack) {
  prompting::PlannerBackendDescriptor d;
  d.id = "script";
  d.kind = prompting::BackendKind::Scripted;
  d.n_candidates = 3;
  EngineParts parts;
  parts.backends.push_back(std::make_shared<prompting::ScriptedBackend>(
      d, std::vector<std::vector<std::string>>{
             {"\"fly\" dogs;", "\"locate\" cats;", "\"locate\" dogs;"},
             {"not a plan"},
         }));
  EngineConfig cfg;
  cfg.run_dir = temp_dir("engine_plan");
  Engine engine(cfg, std::move(parts));
  const PlanOutcome first = engine.plan("find dogs");
  EXPECT_EQ(first.planner_backend, "script");
  EXPECT_EQ(first.candidates.size(), 3u);
  EXPECT_EQ(dsl::serialize_proposals(first.selected), "\"locate\" dogs;");
  EXPECT_FALSE(first.fell_back);

  const PlanOutcome second = engine.plan("find dogs");
  EXPECT_TRUE(second.fell_back);
  EXPECT_EQ(second.planner_backend, "rule-based");

  const ImageRef img = vf_test::add_scene(engine.scenes(), "a", vf_test::dogs_and_lemon_scene());
  const RunOutcome run = engine.run_request("find dogs", {img});
  const auto& notes = run.record.summary["notes"];
  EXPECT_NE(std::find(notes.begin(), notes.end(), "planner backends failed; used the rule-based planner"), notes.end());
  fs::remove_all(cfg.run_dir);
}

TEST(Engine, RetriesAreVisibleInTheRecord) {
  EngineConfig cfg;
  cfg.run_dir = temp_dir("engine_retry");
  EngineParts parts;
  parts.verifier = std::make_shared<vf_test::ScriptedVerifier>(std::vector<double>{0.3, 0.9});
  Engine engine(cfg, std::move(parts));
  const ImageRef img = vf_test::add_scene(engine.scenes(), "a", vf_test::dogs_and_lemon_scene());
  const RunOutcome run = engine.run_request("find dogs", {img});
  ASSERT_EQ(run.record.node_results.size(), 1u);
  EXPECT_EQ(run.record.node_results[0].attempts.size(), 2u);
  EXPECT_EQ(engine.store().load(run.record.run_id).node_results[0].attempts[0].outcome, AttemptOutcome::BelowThreshold);
  fs::remove_all(cfg.run_dir);
}

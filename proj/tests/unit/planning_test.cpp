#include <gtest/gtest.h>

#include "visionflow/dsl/proposals.hpp"
#include "visionflow/planning/dag.hpp"
#include "visionflow/planning/evaluation.hpp"
#include "visionflow/planning/scoring.hpp"
#include "visionflow/prompting/backend.hpp"

using namespace visionflow;
using namespace visionflow::planning;

namespace {

ProposalSet P(std::string_view text) { return dsl::parse_proposals(text); }

const std::string kCorpus = std::string(VISIONFLOW_FIXTURES) + "/corpus/gold.jsonl";

}  // namespace

TEST(Discrepancy, EditDistanceOverItems) {
  const ProposalSet gold = P("\"locate\" dogs; \"segment\" dogs; \"locate\" frogs; \"segment\" frogs;");
  EXPECT_EQ(discrepancy(gold, gold), 0.0);
  EXPECT_EQ(discrepancy(P("\"locate\" dogs; \"segment\" dogs; \"locate\" frogs;"), gold), 0.25);
  EXPECT_EQ(discrepancy(P("\"segment\" dogs; \"locate\" dogs; \"segment\" frogs; \"locate\" frogs;"), gold), 0.75);
  EXPECT_EQ(discrepancy(ProposalSet{}, P("\"locate\" a; \"locate\" b;")), 1.0);
  EXPECT_EQ(discrepancy(ProposalSet{}, ProposalSet{}), 0.0);
  EXPECT_EQ(discrepancy(P("\"edit\" a :: Replace X;"), P("\"edit\" a :: replace  x;")), 0.0);
}

TEST(Regularizer, PenaltyRules) {
  EXPECT_EQ(regularizer(P("\"locate\" dogs; \"segment\" dogs;")), 0.0);
  EXPECT_EQ(regularizer(P("\"segment\" dogs;")), 0.5);
  EXPECT_EQ(regularizer(P("\"segment\" dogs; \"locate\" dogs;")), 0.5);  // locate must come first
  EXPECT_EQ(regularizer(P("\"locate\" a; \"locate\" a;")), 0.25);
  EXPECT_EQ(regularizer(P("\"integrate\"; \"locate\" a;")), 0.5);
  EXPECT_EQ(regularizer(P("\"locate\" a; \"integrate\"; \"integrate\";")), 1.0);
  EXPECT_EQ(regularizer(P("\"locate\" a; \"segment\" a;"), {OperationKind::Locate}), 1.0);
}

TEST(Congruence, FractionOfTargetsMentioned) {
  EXPECT_EQ(congruence("find Dogs and cats", P("\"locate\" dogs; \"locate\" birds;")), 0.5);
  EXPECT_EQ(congruence("anything", P("\"generate\" image :: x; \"integrate\";")), 1.0);
  EXPECT_EQ(congruence("the front  car", P("\"locate\" front car;")), 1.0);
}

TEST(SelectBest, LowestTotalThenShortestThenText) {
  const std::string req = "highlight dogs";
  const ProposalSet good = P("\"locate\" dogs; \"segment\" dogs;");
  const ProposalSet bad = P("\"segment\" dogs;");
  const Selection s = select_best(req, {bad, good}, 1.0);
  EXPECT_EQ(s.index, 1u);
  EXPECT_EQ(s.score.total, 0.0);

  const ProposalSet longer = P("\"locate\" dogs; \"segment\" dogs; \"caption\" dogs;");
  const ProposalSet shorter = P("\"locate\" dogs;");
  EXPECT_EQ(select_best(req, {longer, shorter}, 1.0).index, 1u);

  const ProposalSet x = P("\"locate\" dogs;");
  const ProposalSet y = P("\"caption\" dogs;");
  EXPECT_EQ(select_best(req, {x, y}, 1.0).index, 1u);  // same score and size: "\"caption\"..." sorts first
  EXPECT_THROW(select_best(req, {}, 1.0), Error);
}

TEST(SelectBest, LambdaTradesCongruenceAgainstFeasibility) {
  const std::string req = "highlight dogs";
  const ProposalSet on_topic = P("\"segment\" dogs;");   // congruence 1, regularizer 0.5
  const ProposalSet off_topic = P("\"locate\" cats;");   // congruence 0, regularizer 0
  EXPECT_EQ(select_best(req, {on_topic, off_topic}, 1.0).index, 0u);
  EXPECT_EQ(select_best(req, {on_topic, off_topic}, 3.0).index, 1u);
}

TEST(Dag, WorkedExampleEdges) {
  const PlanDAG dag = build_dag(
      P("\"locate\" dogs; \"segment\" dogs; \"locate\" lemons; \"segment\" lemons; \"integrate\" all results;"), {});
  ASSERT_EQ(dag.nodes.size(), 5u);
  EXPECT_TRUE(dag.nodes[0].depends_on.empty());
  EXPECT_EQ(dag.nodes[1].depends_on, std::vector<int>{0});
  EXPECT_TRUE(dag.nodes[2].depends_on.empty());
  EXPECT_EQ(dag.nodes[3].depends_on, std::vector<int>{2});
  EXPECT_EQ(dag.nodes[4].depends_on, (std::vector<int>{0, 1, 2, 3}));
  EXPECT_FALSE(dag.nodes[1].whole_image);
}

TEST(Dag, EditAndWholeImageRules) {
  const PlanDAG a = build_dag(P("\"locate\" car; \"segment\" car; \"edit\" car :: paint it;"), {});
  EXPECT_EQ(a.nodes[2].depends_on, std::vector<int>{1});
  const PlanDAG b = build_dag(P("\"locate\" car; \"edit\" car :: paint it;"), {});
  EXPECT_EQ(b.nodes[1].depends_on, std::vector<int>{0});
  const PlanDAG c = build_dag(P("\"segment\" car; \"edit\" boat :: x; \"generate\";"), {});
  EXPECT_TRUE(c.nodes[0].whole_image);
  EXPECT_TRUE(c.nodes[1].whole_image);
  EXPECT_TRUE(c.nodes[0].depends_on.empty());
  EXPECT_TRUE(c.nodes[2].depends_on.empty());
  // Segment binds to the latest earlier locate of the same target.
  const PlanDAG d = build_dag(P("\"locate\" a; \"locate\" a; \"segment\" a;"), {});
  EXPECT_EQ(d.nodes[2].depends_on, std::vector<int>{1});
}

TEST(Dag, RejectsInvalidSetsAndCycles) {
  EXPECT_THROW(build_dag(P("\"integrate\"; \"locate\" a;"), {}), Error);
  PlanDAG dag = build_dag(P("\"locate\" a; \"segment\" a;"), {});
  EXPECT_EQ(topological_order(dag), (std::vector<int>{0, 1}));
  dag.nodes[0].depends_on = {1};
  EXPECT_THROW(topological_order(dag), Error);
  dag.nodes[0].depends_on = {7};
  EXPECT_THROW(topological_order(dag), Error);
}

TEST(Evaluation, RuleBasedIsExactOnTheGoldCorpus) {
  prompting::RuleBasedBackend backend;
  const auto report = evaluate_backend(backend, load_corpus(kCorpus), prompting::default_prompt_config());
  EXPECT_EQ(report.items, 4u);
  EXPECT_EQ(report.exact_match_rate, 1.0);
  EXPECT_EQ(report.mean_discrepancy, 0.0);
  EXPECT_EQ(report.parse_failures, 0u);
  EXPECT_TRUE(check_report_schema(nlohmann::json(report_to_json(report))).empty());
}

TEST(Evaluation, CorruptedBackendScoresZero) {
  prompting::PlannerBackendDescriptor d;
  d.id = "corrupt";
  d.kind = prompting::BackendKind::Scripted;
  prompting::ScriptedBackend backend(d, {{"\"fly\" dogs;"}, {"\"locate\" cats;"}, {"nonsense"}, {"\"paint\" x;"}});
  const auto report = evaluate_backend(backend, load_corpus(kCorpus), prompting::default_prompt_config());
  EXPECT_EQ(report.exact_match_rate, 0.0);
  EXPECT_EQ(report.parse_failures, 3u);
  EXPECT_GT(report.mean_discrepancy, 0.9);
  EXPECT_TRUE(check_report_schema(nlohmann::json(report_to_json(report))).empty());
}

TEST(Evaluation, CorpusFormatErrors) {
  EXPECT_THROW(parse_corpus("{\"input\": \"x\"}\n"), Error);
  EXPECT_THROW(parse_corpus("{\"input\": \"x\", \"gold\": \"\\\"fly\\\" y;\"}\n"), Error);
  EXPECT_EQ(parse_corpus("\n{\"input\": \"x\", \"gold\": \"\\\"locate\\\" y;\"}\n\n").size(), 1u);
  nlohmann::json bad = {{"backend", "x"}};
  EXPECT_FALSE(check_report_schema(bad).empty());
}

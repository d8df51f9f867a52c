#include "visionflow/planning/dag.hpp"

#include <deque>
#include <map>

#include "visionflow/dsl/proposals.hpp"
#include "visionflow/error.hpp"

namespace visionflow::planning {

namespace {

std::optional<int> latest(const std::vector<PlanNode>& nodes, OperationKind op, const std::optional<Label>& target) {
  for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) {
    if (it->proposal.op == op && it->proposal.target == target) return it->node_id;
  }
  return std::nullopt;
}

}  // namespace

PlanDAG build_dag(const ProposalSet& set, const std::vector<ImageRef>& images, std::string request) {
  const auto diags = dsl::validate_set(set);
  if (!diags.empty()) {
    throw Error(ErrorKind::InvalidProposalSet, std::string(dsl::diagnostic_name(diags.front().kind)) + ": " +
                                                   diags.front().detail);
  }
  PlanDAG dag;
  dag.request = std::move(request);
  dag.images = images;
  for (const ActionProposal& p : set.items) {
    PlanNode node;
    node.node_id = static_cast<int>(dag.nodes.size());
    node.proposal = p;
    switch (p.op) {
      case OperationKind::Segment:
        if (auto dep = latest(dag.nodes, OperationKind::Locate, p.target)) {
          node.depends_on.push_back(*dep);
        } else {
          node.whole_image = true;
        }
        break;
      case OperationKind::Edit: {
        auto dep = latest(dag.nodes, OperationKind::Segment, p.target);
        if (!dep) dep = latest(dag.nodes, OperationKind::Locate, p.target);
        if (dep) {
          node.depends_on.push_back(*dep);
        } else {
          node.whole_image = true;
        }
        break;
      }
      case OperationKind::Integrate:
        for (const PlanNode& prior : dag.nodes) node.depends_on.push_back(prior.node_id);
        break;
      default:
        break;
    }
    dag.nodes.push_back(std::move(node));
  }
  return dag;
}

std::vector<int> topological_order(const PlanDAG& dag) {
  std::map<int, int> indegree;
  std::map<int, std::vector<int>> dependents;
  for (const PlanNode& n : dag.nodes) indegree[n.node_id] = 0;
  for (const PlanNode& n : dag.nodes) {
    for (int d : n.depends_on) {
      if (!indegree.contains(d)) {
        throw Error(ErrorKind::InvalidProposalSet, "node " + std::to_string(n.node_id) + " depends on unknown node");
      }
      ++indegree[n.node_id];
      dependents[d].push_back(n.node_id);
    }
  }
  std::deque<int> ready;
  for (const auto& [id, deg] : indegree) {
    if (deg == 0) ready.push_back(id);
  }
  std::vector<int> order;
  while (!ready.empty()) {
    const int id = ready.front();
    ready.pop_front();
    order.push_back(id);
    for (int next : dependents[id]) {
      if (--indegree[next] == 0) ready.push_back(next);
    }
  }
  if (order.size() != dag.nodes.size()) throw Error(ErrorKind::InvalidProposalSet, "plan contains a cycle");
  return order;
}

}  // namespace visionflow::planning

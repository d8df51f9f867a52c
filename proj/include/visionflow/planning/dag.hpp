#pragma once

#include <optional>
#include <string>
#include <vector>

#include "visionflow/core/types.hpp"

namespace visionflow::planning {

struct PlanNode {
  int node_id = 0;
  ActionProposal proposal;
  /// Always refers to nodes created earlier, which keeps the graph acyclic.
  std::vector<int> depends_on;
  std::optional<std::string> model_id;
  /// Segment/Edit with no upstream region source: runs over the full image.
  bool whole_image = false;

  friend bool operator==(const PlanNode&, const PlanNode&) = default;
};

struct PlanDAG {
  std::vector<PlanNode> nodes;
  std::string request;
  std::vector<ImageRef> images;

  friend bool operator==(const PlanDAG&, const PlanDAG&) = default;
};

/// One node per proposal, in order. Segment(t) depends on the latest earlier
/// Locate(t); Edit(t) on the latest earlier Segment(t), else Locate(t);
/// Integrate on every other node. Everything else is independent.
/// Throws Error(InvalidProposalSet) if validate_set reports anything.
PlanDAG build_dag(const ProposalSet& set, const std::vector<ImageRef>& images, std::string request = {});

/// Kahn ordering; throws Error(InvalidProposalSet) on a cycle or a dangling
/// dependency.
std::vector<int> topological_order(const PlanDAG& dag);

}  // namespace visionflow::planning

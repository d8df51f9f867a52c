#pragma once

#include <set>
#include <string_view>
#include <vector>

#include "visionflow/core/types.hpp"

namespace visionflow::planning {

/// Penalty weights of the feasibility regularizer.
struct Penalties {
  static constexpr double kUnsupportedOperation = 1.0;
  static constexpr double kMissingLocate = 0.5;
  static constexpr double kDuplicate = 0.25;
  static constexpr double kIntegrateViolation = 0.5;
};

struct ProposalScore {
  double congruence = 1.0;
  double regularizer = 0.0;
  double lambda = 1.0;
  double total = 0.0;

  friend bool operator==(const ProposalScore&, const ProposalScore&) = default;
};

/// (1 - congruence) + lambda * regularizer
ProposalScore make_score(double congruence, double regularizer, double lambda);

/// Levenshtein distance over (op, target, instruction) tokens divided by the
/// longer length. Zero for two empty sets.
double discrepancy(const ProposalSet& generated, const ProposalSet& gold);

/// Feasibility penalty of a (possibly invalid) set:
///   1.0  per proposal whose operation is not in `supported`
///   0.5  per Segment/Edit without an earlier Locate of the same target
///   0.25 per non-Integrate proposal identical to an earlier one
///   0.5  per misplaced or duplicate Integrate
double regularizer(const ProposalSet& set, const std::set<OperationKind>& supported);
double regularizer(const ProposalSet& set);

/// Fraction of the set's distinct concrete targets that occur verbatim in
/// the normalized request. "image" and "all results" are not concrete.
/// 1.0 when there are none.
double congruence(std::string_view request, const ProposalSet& set);

struct Selection {
  ProposalSet set;
  ProposalScore score;
  std::size_t index = 0;  // position in the candidate list
};

/// Minimum total; ties go to fewer proposals, then to the lexicographically
/// smallest canonical serialization. Throws Error(NoCandidates).
Selection select_best(std::string_view request, const std::vector<ProposalSet>& candidates, double lambda,
                      const std::set<OperationKind>& supported);
Selection select_best(std::string_view request, const std::vector<ProposalSet>& candidates, double lambda = 1.0);

}  // namespace visionflow::planning

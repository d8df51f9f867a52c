#include "visionflow/planning/scoring.hpp"

#include <algorithm>
#include <string>
#include <tuple>

#include "visionflow/dsl/proposals.hpp"
#include "visionflow/error.hpp"

namespace visionflow::planning {

namespace {

using Token = std::tuple<OperationKind, std::string, std::string>;

std::vector<Token> tokens(const ProposalSet& set) {
  std::vector<Token> out;
  out.reserve(set.items.size());
  for (const ActionProposal& p : set.items) {
    out.emplace_back(p.op, p.target ? p.target->text() : std::string{},
                     p.instruction ? normalize_text(*p.instruction) : std::string{});
  }
  return out;
}

bool same_target(const ActionProposal& a, const ActionProposal& b) { return a.target && b.target && *a.target == *b.target; }

std::set<OperationKind> all_ops() { return {kAllOperations.begin(), kAllOperations.end()}; }

}  // namespace

ProposalScore make_score(double congruence_value, double regularizer_value, double lambda) {
  return {congruence_value, regularizer_value, lambda, (1.0 - congruence_value) + lambda * regularizer_value};
}

double discrepancy(const ProposalSet& generated, const ProposalSet& gold) {
  const auto a = tokens(generated);
  const auto b = tokens(gold);
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 0.0;
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return static_cast<double>(prev[b.size()]) / static_cast<double>(longest);
}

double regularizer(const ProposalSet& set, const std::set<OperationKind>& supported) {
  double penalty = 0.0;
  bool seen_integrate = false;
  const std::size_t n = set.items.size();
  for (std::size_t i = 0; i < n; ++i) {
    const ActionProposal& p = set.items[i];
    if (!supported.contains(p.op)) penalty += Penalties::kUnsupportedOperation;
    if (p.op == OperationKind::Segment || p.op == OperationKind::Edit) {
      const bool located = std::any_of(set.items.begin(), set.items.begin() + static_cast<std::ptrdiff_t>(i),
                                       [&](const ActionProposal& q) {
                                         return q.op == OperationKind::Locate && same_target(q, p);
                                       });
      if (!located) penalty += Penalties::kMissingLocate;
    }
    if (p.op == OperationKind::Integrate) {
      if (seen_integrate || i + 1 != n) penalty += Penalties::kIntegrateViolation;
      seen_integrate = true;
    } else if (std::find(set.items.begin(), set.items.begin() + static_cast<std::ptrdiff_t>(i), p) !=
               set.items.begin() + static_cast<std::ptrdiff_t>(i)) {
      penalty += Penalties::kDuplicate;
    }
  }
  return penalty;
}

double regularizer(const ProposalSet& set) { return regularizer(set, all_ops()); }

double congruence(std::string_view request, const ProposalSet& set) {
  const std::string haystack = normalize_text(request);
  std::vector<std::string> targets;
  for (const ActionProposal& p : set.items) {
    if (!p.target) continue;
    const std::string& t = p.target->text();
    if (t == "image" || t == "all results") continue;
    if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
  }
  if (targets.empty()) return 1.0;
  const auto hits = std::count_if(targets.begin(), targets.end(),
                                  [&](const std::string& t) { return haystack.find(t) != std::string::npos; });
  return static_cast<double>(hits) / static_cast<double>(targets.size());
}

Selection select_best(std::string_view request, const std::vector<ProposalSet>& candidates, double lambda,
                      const std::set<OperationKind>& supported) {
  if (candidates.empty()) throw Error(ErrorKind::NoCandidates, "no candidate proposal sets");
  std::optional<Selection> best;
  std::string best_text;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const ProposalSet& c = candidates[i];
    const ProposalScore score = make_score(congruence(request, c), regularizer(c, supported), lambda);
    std::string text = dsl::serialize_proposals(c);
    const bool better =
        !best || std::make_tuple(score.total, c.size(), std::string_view(text)) <
                     std::make_tuple(best->score.total, best->set.size(), std::string_view(best_text));
    if (better) {
      best = Selection{c, score, i};
      best_text = std::move(text);
    }
  }
  return *best;
}

Selection select_best(std::string_view request, const std::vector<ProposalSet>& candidates, double lambda) {
  return select_best(request, candidates, lambda, all_ops());
}

}  // namespace visionflow::planning

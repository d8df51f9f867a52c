#pragma once

#include <string_view>

#include "visionflow/core/types.hpp"

namespace visionflow::prompting {

/// Deterministic intent-table planner, used when no language model is
/// reachable. Each verb from the table opens a clause:
///   find/locate/detect/identify   -> Locate(t)
///   highlight/segment/mask        -> Locate(t), Segment(t)
///   replace/cover/remove          -> Locate(t), Segment(t), Edit(t :: verb + remainder)
///   generate/add/create/make      -> Generate(image :: request)
/// Targets follow the verb up to a preposition or punctuation, are split on
/// "and", lose leading determiners, and "them"/"it" stand for every target
/// seen so far. Proposals are grouped per target in first-seen order. An
/// Integrate is appended when two or more targets were produced by two or
/// more clauses. A request with no usable verb becomes a single Generate.
///
/// Throws Error(UnplannableRequest) for blank input.
ProposalSet rule_based_plan(std::string_view user_input);

}  // namespace visionflow::prompting

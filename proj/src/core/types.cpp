#include "visionflow/core/types.hpp"

#include <string>

#include "visionflow/error.hpp"

namespace visionflow {

std::string_view op_name(OperationKind op) noexcept {
  switch (op) {
    case OperationKind::Locate: return "locate";
    case OperationKind::Segment: return "segment";
    case OperationKind::Generate: return "generate";
    case OperationKind::Edit: return "edit";
    case OperationKind::Classify: return "classify";
    case OperationKind::Caption: return "caption";
    case OperationKind::Integrate: return "integrate";
  }
  return "";
}

std::optional<OperationKind> parse_op_name(std::string_view name) noexcept {
  for (OperationKind op : kAllOperations) {
    if (op_name(op) == name) return op;
  }
  return std::nullopt;
}

OperationKind op_from_name(std::string_view name) {
  if (auto op = parse_op_name(name)) return *op;
  throw Error(ErrorKind::InvalidRequest, "unknown operation '" + std::string(name) + "'");
}

bool op_requires_target(OperationKind op) noexcept {
  return op == OperationKind::Locate || op == OperationKind::Segment || op == OperationKind::Classify ||
         op == OperationKind::Edit;
}

bool op_takes_instruction(OperationKind op) noexcept {
  return op == OperationKind::Edit || op == OperationKind::Generate;
}

ActionProposal make_proposal(OperationKind op, std::string_view target, std::string_view instruction) {
  ActionProposal p;
  p.op = op;
  if (!target.empty()) p.target = Label::normalize(target);
  if (!instruction.empty()) p.instruction = collapse_whitespace(instruction);
  return p;
}

void validate_scene(const SceneSpec& scene) {
  if (scene.width < 1 || scene.height < 1) {
    throw Error(ErrorKind::InvalidScene, "scene dimensions must be positive");
  }
  for (std::size_t i = 0; i < scene.shapes.size(); ++i) {
    const SceneShape& s = scene.shapes[i];
    if (!s.box().fits(scene.width, scene.height)) {
      throw Error(ErrorKind::InvalidScene, "shape " + std::to_string(i) + " (" + s.label.text() +
                                               ") is not fully inside the canvas");
    }
  }
}

}  // namespace visionflow

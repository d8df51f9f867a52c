#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "visionflow/core/label.hpp"
#include "visionflow/core/mask_rle.hpp"

namespace visionflow {

enum class OperationKind { Locate, Segment, Generate, Edit, Classify, Caption, Integrate };

inline constexpr std::array<OperationKind, 7> kAllOperations = {
    OperationKind::Locate,   OperationKind::Segment, OperationKind::Generate, OperationKind::Edit,
    OperationKind::Classify, OperationKind::Caption, OperationKind::Integrate};

std::string_view op_name(OperationKind op) noexcept;
std::optional<OperationKind> parse_op_name(std::string_view name) noexcept;
/// Throws Error(InvalidRequest) on an unknown name.
OperationKind op_from_name(std::string_view name);

bool op_requires_target(OperationKind op) noexcept;
bool op_takes_instruction(OperationKind op) noexcept;

/// One atomic operation decomposed from a user request.
struct ActionProposal {
  OperationKind op = OperationKind::Locate;
  std::optional<Label> target;
  std::optional<std::string> instruction;
  /// Indices into the request's image list; empty means every image.
  std::vector<int> image_refs;

  friend bool operator==(const ActionProposal&, const ActionProposal&) = default;
};

ActionProposal make_proposal(OperationKind op, std::string_view target = {}, std::string_view instruction = {});

struct ProposalSet {
  std::vector<ActionProposal> items;

  std::size_t size() const noexcept { return items.size(); }
  bool empty() const noexcept { return items.empty(); }
  friend bool operator==(const ProposalSet&, const ProposalSet&) = default;
};

struct BBox {
  int x = 0;
  int y = 0;
  int w = 1;
  int h = 1;

  friend bool operator==(const BBox&, const BBox&) = default;
  long long area() const noexcept { return static_cast<long long>(w) * h; }
  bool fits(int width, int height) const noexcept {
    return x >= 0 && y >= 0 && w >= 1 && h >= 1 && x + w <= width && y + h <= height;
  }
};

struct Detection {
  Label label;
  BBox box;
  double confidence = 0.0;

  friend bool operator==(const Detection&, const Detection&) = default;
};

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct InstanceMask {
  Label label;
  int instance_id = 0;
  MaskRLE mask;
  Rgb color;

  friend bool operator==(const InstanceMask&, const InstanceMask&) = default;
};

enum class ImageSourceKind { Raster, Scene };

struct ImageRef {
  std::string id;
  int width = 1;
  int height = 1;
  ImageSourceKind kind = ImageSourceKind::Scene;
  /// Path or URL the pixels (or the scene description) are read from.
  std::string uri;
  /// Set on images produced by generate/edit executors.
  std::string provenance;

  friend bool operator==(const ImageRef&, const ImageRef&) = default;
};

enum class ShapeKind { Rect, Ellipse };

struct SceneShape {
  Label label;
  ShapeKind kind = ShapeKind::Rect;
  int x = 0;
  int y = 0;
  int w = 1;
  int h = 1;

  BBox box() const noexcept { return {x, y, w, h}; }
  friend bool operator==(const SceneShape&, const SceneShape&) = default;
};

/// Synthetic ground truth used in place of real pixels by the mock executors.
struct SceneSpec {
  int width = 1;
  int height = 1;
  std::vector<SceneShape> shapes;

  friend bool operator==(const SceneSpec&, const SceneSpec&) = default;
};

/// Throws Error(InvalidScene) if dimensions are non-positive or any shape
/// leaves the canvas.
void validate_scene(const SceneSpec& scene);

}  // namespace visionflow

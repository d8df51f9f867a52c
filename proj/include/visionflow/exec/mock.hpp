#pragma once

#include <memory>

#include "visionflow/exec/executor.hpp"

namespace visionflow::exec {

inline constexpr double kMockConfidence = 0.9;

/// Locate: one detection per ground-truth shape with the target label, box =
/// shape bounds. Classify: the target with 0.9 if present, else 0.
class MockDetector final : public Executor {
 public:
  explicit MockDetector(std::shared_ptr<const SceneCatalog> scenes) : scenes_(std::move(scenes)) {}
  ExecOutput execute(const ExecInput& input) override;

 private:
  std::shared_ptr<const SceneCatalog> scenes_;
};

/// Without regions: one mask per target shape in declaration order. With
/// regions: one mask per region, in region order. Each region is matched to
/// the target shape whose bounds overlap it best (IoU, preferring shapes not
/// yet claimed by an earlier region, then declaration order) and emits that
/// shape's pixels clipped to the region. A region touching no target shape
/// yields an empty mask.
class MockSegmenter final : public Executor {
 public:
  explicit MockSegmenter(std::shared_ptr<const SceneCatalog> scenes) : scenes_(std::move(scenes)) {}
  ExecOutput execute(const ExecInput& input) override;

 private:
  std::shared_ptr<const SceneCatalog> scenes_;
};

/// Generate/Edit: returns a reference to a copy of the input image with the
/// instruction stamped into its provenance.
class MockGenerator final : public Executor {
 public:
  ExecOutput execute(const ExecInput& input) override;
};

/// Caption: counts of each label in the scene, in declaration order.
class MockCaptioner final : public Executor {
 public:
  explicit MockCaptioner(std::shared_ptr<const SceneCatalog> scenes) : scenes_(std::move(scenes)) {}
  ExecOutput execute(const ExecInput& input) override;

 private:
  std::shared_ptr<const SceneCatalog> scenes_;
};

/// Integrate runs inside the engine; this only acknowledges the step.
class NativeIntegrator final : public Executor {
 public:
  ExecOutput execute(const ExecInput& input) override;
};

}  // namespace visionflow::exec
